#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "abrlab/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// exit codes: 0 success, 1 config error, 2 numerical failure
constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;

int load_config(const std::string& path, abrlab::ExperimentConfig& out) {
    const abrlab::ParseResult parsed = abrlab::parse_config(read_file(path));
    if (!parsed.ok()) {
        std::cerr << "error: invalid config '" << path << "':\n";
        for (const std::string& e : parsed.errors) std::cerr << "  - " << e << "\n";
        return kConfigError;
    }
    out = *parsed.config;
    return 0;
}

int run_one(const abrlab::ExperimentConfig& config) {
    try {
        const abrlab::RunArtifacts art = abrlab::run_experiment(config);
        std::cout << "wrote " << art.summary.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        // structured error record, same key-value format as the summaries
        std::cerr << "status = error\nmessage = " << e.what() << "\n";
        return kNumericalError;
    }
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> parts;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) parts.push_back(item);
    return parts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"abrlab: absorbing-boundary / soft-detector / GRW simulation runner"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run the experiment described by a config file");
    run_cmd->add_option("config", config_path, "config file")->required();

    auto* validate_cmd = app.add_subcommand("validate", "parse and validate a config file");
    validate_cmd->add_option("config", config_path, "config file")->required();

    std::string sweep_param;
    std::string sweep_values;
    auto* sweep_cmd =
        app.add_subcommand("sweep", "run the config once per value of a swept parameter");
    sweep_cmd->add_option("config", config_path, "config file")->required();
    sweep_cmd->add_option("--param", sweep_param, "config key to sweep")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) {
            abrlab::ExperimentConfig config;
            if (int rc = load_config(config_path, config); rc != 0) return rc;
            std::cout << "ok: " << abrlab::config_hash(config) << "\n";
            return 0;
        }
        if (run_cmd->parsed()) {
            abrlab::ExperimentConfig config;
            if (int rc = load_config(config_path, config); rc != 0) return rc;
            return run_one(config);
        }
        // sweep: re-parse the config text with the swept key overridden, so
        // the override goes through the same validation as everything else.
        const std::string base_text = read_file(config_path);
        for (const std::string& value : split_csv(sweep_values)) {
            std::ostringstream text;
            std::istringstream in(base_text);
            std::string line;
            while (std::getline(in, line)) {
                const auto eq = line.find('=');
                const std::string key =
                    eq == std::string::npos ? "" : line.substr(0, line.find('='));
                const auto b = key.find_first_not_of(" \t");
                const auto e = key.find_last_not_of(" \t");
                const std::string trimmed =
                    b == std::string::npos ? "" : key.substr(b, e - b + 1);
                if (trimmed != sweep_param) text << line << "\n";
            }
            text << sweep_param << " = " << value << "\n";
            const abrlab::ParseResult parsed = abrlab::parse_config(text.str());
            if (!parsed.ok()) {
                std::cerr << "error: sweep point " << sweep_param << "=" << value
                          << " is invalid:\n";
                for (const std::string& err : parsed.errors) std::cerr << "  - " << err << "\n";
                return kConfigError;
            }
            abrlab::ExperimentConfig config = *parsed.config;
            config.output_dir = (std::filesystem::path(config.output_dir) /
                                 (sweep_param + "=" + value))
                                    .string();
            std::cout << "sweep " << sweep_param << " = " << value << "\n";
            if (int rc = run_one(config); rc != 0) return rc;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
}
