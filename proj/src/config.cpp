#include "abrlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace abrlab {

const char* to_string(Model m) {
    switch (m) {
        case Model::Abr: return "abr";
        case Model::Soft: return "soft";
        case Model::GrwConstant: return "grw_constant";
        case Model::GrwFirstDetection: return "grw_first_detection";
        default: return "limit_study";
    }
}

double ExperimentConfig::resolved_dt() const {
    if (dt > 0.0) return dt;
    const double dx = grid().dx();
    return dx * dx * mass / hbar;
}

double ExperimentConfig::resolved_sigma() const {
    return sigma > 0.0 ? sigma : 5.0 * grid().dx();
}

BoundaryCondition ExperimentConfig::boundary(const std::string& name) const {
    if (name == "dirichlet") return Dirichlet{};
    if (name == "neumann") return Neumann{};
    if (name == "robin") return Robin{robin_alpha};
    throw std::invalid_argument("unknown boundary condition: " + name);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct RawEntry {
    std::string value;
    std::size_t line;
};

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "model",        "x_min",        "x_max",       "n_points",     "hbar",
        "mass",         "V0",           "packet_center", "packet_width", "packet_k0",
        "state_file",   "dt",           "t_max",       "n_bins",       "bc_left",
        "bc_right",     "robin_alpha",  "kappa_left",  "kappa_right",  "sigma",
        "lambda0",      "layer_L",      "layer_lambda", "outer_bc",    "kappa_target",
        "layer_L0",     "layer_levels", "ensemble_n",  "seed",         "output_dir"};
    return keys;
}

class Reader {
  public:
    Reader(const std::map<std::string, RawEntry>& entries, std::vector<std::string>& errors)
        : entries_(entries), errors_(errors) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    void number(const std::string& key, double& out) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return;
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("");
            out = v;
        } catch (...) {
            errors_.push_back("key '" + key + "': not a number: '" + it->second.value + "'");
        }
    }

    void count(const std::string& key, std::size_t& out) {
        double v = static_cast<double>(out);
        const bool present = has(key);
        number(key, v);
        if (present && (v < 0.0 || v != std::floor(v)))
            errors_.push_back("key '" + key + "': must be a nonnegative integer");
        else
            out = static_cast<std::size_t>(v);
    }

    void text(const std::string& key, std::string& out) {
        auto it = entries_.find(key);
        if (it != entries_.end()) out = it->second.value;
    }

    void optional_number(const std::string& key, std::optional<double>& out) {
        if (!has(key)) return;
        double v = 0.0;
        number(key, v);
        out = v;
    }

    void require(const std::string& key, const char* why) {
        if (!has(key)) errors_.push_back("missing required key '" + key + "' (" + why + ")");
    }

    void check(bool cond, const std::string& message) {
        if (!cond) errors_.push_back(message);
    }

  private:
    const std::map<std::string, RawEntry>& entries_;
    std::vector<std::string>& errors_;
};

}  // namespace

ParseResult parse_config(const std::string& text) {
    ParseResult result;
    std::map<std::string, RawEntry> entries;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            result.errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            result.errors.push_back("line " + std::to_string(line_no) + ": empty key or value");
            continue;
        }
        if (!known_keys().count(key)) {
            result.errors.push_back("line " + std::to_string(line_no) + ": unknown key '" + key +
                                    "'");
            continue;
        }
        auto [it, inserted] = entries.emplace(key, RawEntry{value, line_no});
        if (!inserted)
            result.errors.push_back("duplicate key '" + key + "' at lines " +
                                    std::to_string(it->second.line) + " and " +
                                    std::to_string(line_no));
    }

    ExperimentConfig cfg;
    Reader r(entries, result.errors);

    r.require("model", "selects the experiment");
    std::string model_name = "abr";
    r.text("model", model_name);
    if (model_name == "abr")
        cfg.model = Model::Abr;
    else if (model_name == "soft")
        cfg.model = Model::Soft;
    else if (model_name == "grw_constant")
        cfg.model = Model::GrwConstant;
    else if (model_name == "grw_first_detection")
        cfg.model = Model::GrwFirstDetection;
    else if (model_name == "limit_study")
        cfg.model = Model::LimitStudy;
    else
        result.errors.push_back("key 'model': unknown model '" + model_name + "'");

    r.number("x_min", cfg.x_min);
    r.number("x_max", cfg.x_max);
    r.count("n_points", cfg.n_points);
    r.number("hbar", cfg.hbar);
    r.number("mass", cfg.mass);
    r.number("V0", cfg.V0);
    r.number("packet_center", cfg.packet_center);
    r.number("packet_width", cfg.packet_width);
    r.number("packet_k0", cfg.packet_k0);
    r.text("state_file", cfg.state_file);
    r.number("dt", cfg.dt);
    r.number("t_max", cfg.t_max);
    r.count("n_bins", cfg.n_bins);
    r.text("bc_left", cfg.bc_left);
    r.text("bc_right", cfg.bc_right);
    r.number("robin_alpha", cfg.robin_alpha);
    r.optional_number("kappa_left", cfg.kappa_left);
    r.optional_number("kappa_right", cfg.kappa_right);
    r.number("sigma", cfg.sigma);
    r.number("lambda0", cfg.lambda0);
    r.number("layer_L", cfg.layer_L);
    r.number("layer_lambda", cfg.layer_lambda);
    r.text("outer_bc", cfg.outer_bc);
    r.number("kappa_target", cfg.kappa_target);
    r.number("layer_L0", cfg.layer_L0);
    r.count("layer_levels", cfg.layer_levels);
    r.count("ensemble_n", cfg.ensemble_n);
    {
        double seed = static_cast<double>(cfg.seed);
        r.number("seed", seed);
        r.check(seed >= 0.0, "key 'seed': must be nonnegative");
        cfg.seed = static_cast<std::uint64_t>(seed);
    }
    r.text("output_dir", cfg.output_dir);

    // Range validation
    r.check(cfg.x_max > cfg.x_min, "key 'x_max': must exceed x_min");
    r.check(cfg.n_points >= 3, "key 'n_points': need at least 3 nodes");
    r.check(cfg.hbar > 0.0, "key 'hbar': must be positive");
    r.check(cfg.mass > 0.0, "key 'mass': must be positive");
    r.check(cfg.packet_width > 0.0, "key 'packet_width': must be positive");
    r.check(!r.has("dt") || cfg.dt > 0.0, "key 'dt': must be positive");
    r.check(cfg.t_max > 0.0, "key 't_max': must be positive");
    r.check(cfg.n_bins >= 1, "key 'n_bins': need at least one bin");
    r.check(!r.has("sigma") || cfg.sigma > 0.0, "key 'sigma': must be positive");
    r.check(cfg.lambda0 >= 0.0, "key 'lambda0': must be nonnegative");
    r.check(!cfg.kappa_left || *cfg.kappa_left > 0.0, "key 'kappa_left': must be positive");
    r.check(!cfg.kappa_right || *cfg.kappa_right > 0.0, "key 'kappa_right': must be positive");
    for (const std::string* bc : {&cfg.bc_left, &cfg.bc_right})
        r.check(*bc == "dirichlet" || *bc == "neumann" || *bc == "robin",
                "boundary condition must be dirichlet, neumann or robin, got '" + *bc + "'");
    r.check(cfg.outer_bc == "neumann" || cfg.outer_bc == "robin",
            "key 'outer_bc': must be neumann or robin, got '" + cfg.outer_bc + "'");
    r.check(cfg.ensemble_n >= 1, "key 'ensemble_n': must be at least 1");

    // Model-specific requirements
    switch (cfg.model) {
        case Model::Abr:
            r.check(cfg.kappa_left.has_value() || cfg.kappa_right.has_value(),
                    "model abr: needs kappa_left and/or kappa_right");
            break;
        case Model::Soft:
        case Model::GrwFirstDetection:
            r.require("layer_L", "detector layer thickness");
            r.require("layer_lambda", "detector layer rate");
            r.check(!r.has("layer_L") || cfg.layer_L > 0.0, "key 'layer_L': must be positive");
            r.check(!r.has("layer_lambda") || cfg.layer_lambda >= 0.0,
                    "key 'layer_lambda': must be nonnegative");
            break;
        case Model::GrwConstant:
            r.require("lambda0", "constant collapse rate");
            break;
        case Model::LimitStudy:
            r.require("kappa_target", "ABR detector parameter the sequence converges to");
            r.require("layer_L0", "coarsest layer thickness");
            r.check(!r.has("kappa_target") || cfg.kappa_target > 0.0,
                    "key 'kappa_target': must be positive");
            r.check(!r.has("layer_L0") || cfg.layer_L0 > 0.0, "key 'layer_L0': must be positive");
            r.check(cfg.layer_levels >= 1, "key 'layer_levels': must be at least 1");
            break;
    }

    if (result.errors.empty()) result.config = cfg;
    return result;
}

namespace {

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "model = " << to_string(c.model) << "\n";
    out << "x_min = " << fmt(c.x_min) << "\n";
    out << "x_max = " << fmt(c.x_max) << "\n";
    out << "n_points = " << c.n_points << "\n";
    out << "hbar = " << fmt(c.hbar) << "\n";
    out << "mass = " << fmt(c.mass) << "\n";
    out << "V0 = " << fmt(c.V0) << "\n";
    out << "packet_center = " << fmt(c.packet_center) << "\n";
    out << "packet_width = " << fmt(c.packet_width) << "\n";
    out << "packet_k0 = " << fmt(c.packet_k0) << "\n";
    if (!c.state_file.empty()) out << "state_file = " << c.state_file << "\n";
    if (c.dt > 0.0) out << "dt = " << fmt(c.dt) << "\n";
    out << "t_max = " << fmt(c.t_max) << "\n";
    out << "n_bins = " << c.n_bins << "\n";
    out << "bc_left = " << c.bc_left << "\n";
    out << "bc_right = " << c.bc_right << "\n";
    out << "robin_alpha = " << fmt(c.robin_alpha) << "\n";
    if (c.kappa_left) out << "kappa_left = " << fmt(*c.kappa_left) << "\n";
    if (c.kappa_right) out << "kappa_right = " << fmt(*c.kappa_right) << "\n";
    if (c.sigma > 0.0) out << "sigma = " << fmt(c.sigma) << "\n";
    out << "lambda0 = " << fmt(c.lambda0) << "\n";
    if (c.layer_L > 0.0) out << "layer_L = " << fmt(c.layer_L) << "\n";
    if (c.layer_L > 0.0) out << "layer_lambda = " << fmt(c.layer_lambda) << "\n";
    out << "outer_bc = " << c.outer_bc << "\n";
    if (c.kappa_target > 0.0) out << "kappa_target = " << fmt(c.kappa_target) << "\n";
    if (c.layer_L0 > 0.0) out << "layer_L0 = " << fmt(c.layer_L0) << "\n";
    out << "layer_levels = " << c.layer_levels << "\n";
    out << "ensemble_n = " << c.ensemble_n << "\n";
    out << "seed = " << c.seed << "\n";
    out << "output_dir = " << c.output_dir << "\n";
    return out.str();
}

std::string config_hash(const ExperimentConfig& config) {
    // The hash identifies the experiment, not where its files land.
    ExperimentConfig canonical = config;
    canonical.output_dir.clear();
    const std::string text = serialize_config(canonical);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace abrlab
