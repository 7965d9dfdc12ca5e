#include "abrlab/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "abrlab/abr.hpp"
#include "abrlab/detector_limit.hpp"
#include "abrlab/grw.hpp"

namespace abrlab {

namespace {

constexpr const char* kVersion = "abrlab 0.1.0";

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& config) {
    if (const char* env = std::getenv("ABRLAB_OUTPUT_DIR"); env && *env)
        return std::filesystem::path(env);
    return std::filesystem::path(config.output_dir);
}

std::ofstream open_out(const std::filesystem::path& path, const std::string& hash,
                       std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    out << "# config_hash=" << hash << " seed=" << seed << "\n";
    return out;
}

WaveFunction load_state_file(const SpatialGrid& grid, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open state file: " + path);
    std::vector<Complex> values;
    double re, im;
    while (in >> re >> im) values.emplace_back(re, im);
    if (values.size() != grid.n_points)
        throw std::runtime_error("state file has " + std::to_string(values.size()) +
                                 " rows, grid has " + std::to_string(grid.n_points) + " nodes");
    WaveFunction psi(grid, std::move(values));
    normalize(psi);
    return psi;
}

WaveFunction initial_state(const ExperimentConfig& config, const SpatialGrid& grid) {
    if (!config.state_file.empty()) return load_state_file(grid, config.state_file);
    return gaussian_packet(grid, config.packet_center, config.packet_width, config.packet_k0);
}

PropagatorConfig propagator_config(const ExperimentConfig& config) {
    PropagatorConfig cfg;
    cfg.dt = config.resolved_dt();
    cfg.t_max = config.t_max;
    cfg.bc_left = config.boundary(config.bc_left);
    cfg.bc_right = config.boundary(config.bc_right);
    cfg.consts = config.consts();
    return cfg;
}

std::vector<double> potential(const ExperimentConfig& config, const SpatialGrid& grid) {
    if (config.V0 == 0.0) return {};
    return std::vector<double>(grid.n_points, config.V0);
}

void write_distribution(const std::filesystem::path& path, const DetectionDistribution& dist,
                        const std::string& hash, std::uint64_t seed) {
    std::ofstream out = open_out(path, hash, seed);
    out.precision(17);
    out << "t_bin_start,t_bin_end,mass_left,mass_right\n";
    for (std::size_t k = 0; k < dist.n_bins(); ++k)
        out << dist.bin_edges[k] << ',' << dist.bin_edges[k + 1] << ',' << dist.mass_left[k]
            << ',' << dist.mass_right[k] << "\n";
}

void write_summary(const std::filesystem::path& path, const ExperimentConfig& config,
                   const std::string& hash,
                   const std::vector<std::pair<std::string, std::string>>& fields) {
    std::ofstream out = open_out(path, hash, config.seed);
    out << "model = " << to_string(config.model) << "\n";
    out << "config_hash = " << hash << "\n";
    out << "seed = " << config.seed << "\n";
    for (const auto& [k, v] : fields) out << k << " = " << v << "\n";
}

std::vector<std::pair<std::string, std::string>> distribution_summary(
    const DetectionDistribution& dist) {
    std::vector<std::pair<std::string, std::string>> fields;
    fields.emplace_back("detected_mass", fmt(dist.detected_mass()));
    fields.emplace_back("p_never", fmt(dist.p_never));
    fields.emplace_back("truncation_remainder", fmt(dist.truncation_remainder));
    fields.emplace_back("mean_detection_time",
                        dist.detected_mass() > 0.0 ? fmt(mean_detection_time(dist)) : "n/a");
    return fields;
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& config) {
    const auto t_start = std::chrono::steady_clock::now();
    const std::string hash = config_hash(config);
    const std::filesystem::path dir = resolve_output_dir(config);
    std::filesystem::create_directories(dir);

    RunArtifacts art;
    art.manifest = dir / "manifest.txt";
    art.summary = dir / "summary.txt";

    const SpatialGrid grid = config.grid();
    const PropagatorConfig pcfg = propagator_config(config);

    switch (config.model) {
        case Model::Abr: {
            DetectorProfile profile;
            profile.V = potential(config, grid);
            profile.kappa_left = config.kappa_left;
            profile.kappa_right = config.kappa_right;
            const WaveFunction psi0 = initial_state(config, grid);
            const DetectionDistribution dist =
                abr_distribution(psi0, profile, pcfg, config.n_bins);
            art.distribution = dir / "distribution.csv";
            write_distribution(art.distribution, dist, hash, config.seed);
            write_summary(art.summary, config, hash, distribution_summary(dist));
            break;
        }
        case Model::Soft: {
            LayerSpec spec{config.layer_L, config.layer_lambda,
                           config.outer_bc == "robin" ? BoundaryCondition(Robin{config.robin_alpha})
                                                      : BoundaryCondition(Neumann{})};
            const SpatialGrid extended = extend_grid_for_layer(grid, spec.L);
            double L_actual = 0.0;
            DetectorProfile profile = layer_profile(extended, spec, &L_actual);
            profile.V = potential(config, extended);
            PropagatorConfig cfg = pcfg;
            cfg.bc_right = spec.outer_bc;
            const WaveFunction psi0 = initial_state(config, extended);
            const DetectionDistribution dist =
                soft_detection_distribution(psi0, profile, cfg, config.n_bins);
            art.distribution = dir / "distribution.csv";
            write_distribution(art.distribution, dist, hash, config.seed);
            auto fields = distribution_summary(dist);
            fields.emplace_back("layer_L_actual", fmt(L_actual));
            write_summary(art.summary, config, hash, fields);
            break;
        }
        case Model::GrwConstant: {
            GrwConfig gcfg;
            gcfg.dt = pcfg.dt;
            gcfg.t_max = pcfg.t_max;
            gcfg.bc_left = pcfg.bc_left;
            gcfg.bc_right = pcfg.bc_right;
            gcfg.consts = pcfg.consts;
            gcfg.sigma = config.resolved_sigma();
            gcfg.V = potential(config, grid);
            const WaveFunction psi0 = initial_state(config, grid);
            const RateOperatorKind kind = ConstantRate{config.lambda0};

            art.outcomes = dir / "outcomes.csv";
            std::ofstream out = open_out(art.outcomes, hash, config.seed);
            out.precision(17);
            out << "t,x,side\n";
            double sum = 0.0, sum_sq = 0.0;
            for (std::size_t i = 0; i < config.ensemble_n; ++i) {
                const GrwRunRecord rec = run_grw(psi0, kind, gcfg, config.seed + i);
                for (const CollapseEvent& ev : rec.events)
                    out << ev.time << ',' << ev.center << ",bulk\n";
                const auto n_events = static_cast<double>(rec.events.size());
                sum += n_events;
                sum_sq += n_events * n_events;
            }
            const double n = static_cast<double>(config.ensemble_n);
            const double mean = sum / n;
            const double var = n > 1.0 ? (sum_sq - n * mean * mean) / (n - 1.0) : 0.0;
            write_summary(art.summary, config, hash,
                          {{"n_runs", std::to_string(config.ensemble_n)},
                           {"event_count_mean", fmt(mean)},
                           {"event_count_variance", fmt(var)},
                           {"expected_count", fmt(config.lambda0 * config.t_max)}});
            break;
        }
        case Model::GrwFirstDetection: {
            LayerSpec spec{config.layer_L, config.layer_lambda,
                           config.outer_bc == "robin" ? BoundaryCondition(Robin{config.robin_alpha})
                                                      : BoundaryCondition(Neumann{})};
            const SpatialGrid extended = extend_grid_for_layer(grid, spec.L);
            DetectorProfile profile = layer_profile(extended, spec);
            GrwConfig gcfg;
            gcfg.dt = pcfg.dt;
            gcfg.t_max = pcfg.t_max;
            gcfg.bc_left = pcfg.bc_left;
            gcfg.bc_right = spec.outer_bc;
            gcfg.consts = pcfg.consts;
            gcfg.sigma = config.resolved_sigma();
            gcfg.V = potential(config, extended);
            const WaveFunction psi0 = initial_state(config, extended);
            const PositionDependentRate kind{profile.lambda};
            const std::vector<DetectionOutcome> outcomes =
                first_detection_ensemble(psi0, kind, gcfg, config.ensemble_n, config.seed);

            art.outcomes = dir / "outcomes.csv";
            std::ofstream out = open_out(art.outcomes, hash, config.seed);
            out.precision(17);
            out << "t,x,side\n";
            DetectionDistribution dist;
            dist.bin_edges.resize(config.n_bins + 1);
            for (std::size_t k = 0; k <= config.n_bins; ++k)
                dist.bin_edges[k] =
                    config.t_max * static_cast<double>(k) / static_cast<double>(config.n_bins);
            dist.mass_left.assign(config.n_bins, 0.0);
            dist.mass_right.assign(config.n_bins, 0.0);
            std::size_t never = 0;
            double t_sum = 0.0;
            for (const DetectionOutcome& z : outcomes) {
                if (const auto* d = std::get_if<Detected>(&z)) {
                    out << d->time << ',' << d->position << ',' << to_string(d->side) << "\n";
                    auto bin = std::min(config.n_bins - 1,
                                        static_cast<std::size_t>(d->time / config.t_max *
                                                                 static_cast<double>(config.n_bins)));
                    dist.mass_right[bin] += 1.0 / static_cast<double>(config.ensemble_n);
                    t_sum += d->time;
                } else {
                    out << "inf,inf,never\n";
                    ++never;
                }
            }
            dist.p_never =
                static_cast<double>(never) / static_cast<double>(config.ensemble_n);
            art.distribution = dir / "distribution.csv";
            write_distribution(art.distribution, dist, hash, config.seed);
            const std::size_t detected = config.ensemble_n - never;
            write_summary(art.summary, config, hash,
                          {{"n_runs", std::to_string(config.ensemble_n)},
                           {"detected_fraction", fmt(dist.detected_mass())},
                           {"p_never", fmt(dist.p_never)},
                           {"mean_detection_time",
                            detected > 0 ? fmt(t_sum / static_cast<double>(detected)) : "n/a"}});
            break;
        }
        case Model::LimitStudy: {
            const LimitSequence seq = make_limit_sequence(
                config.kappa_target, config.layer_L0, config.layer_levels, grid.dx(),
                pcfg.consts,
                config.outer_bc == "robin" ? BoundaryCondition(Robin{config.robin_alpha})
                                           : BoundaryCondition(Neumann{}));
            const PacketSpec packet{config.packet_center, config.packet_width, config.packet_k0};
            const std::vector<ConvergenceRow> table =
                convergence_study(packet, grid, seq, pcfg, config.n_bins);
            art.convergence = dir / "convergence.csv";
            std::ofstream out = open_out(art.convergence, hash, config.seed);
            out.precision(17);
            out << "L_nominal,L_actual,lambda,tv_distance,ks_distance,detected_mass_error,"
                   "resolvable,tv_decreased\n";
            for (const ConvergenceRow& row : table)
                out << row.L_nominal << ',' << row.L_actual << ',' << row.lambda << ','
                    << row.tv_distance << ',' << row.ks_distance << ','
                    << row.detected_mass_error << ',' << (row.resolvable ? 1 : 0) << ','
                    << (row.tv_decreased ? 1 : 0) << "\n";
            write_summary(art.summary, config, hash,
                          {{"levels", std::to_string(table.size())},
                           {"final_tv_distance",
                            table.empty() ? "n/a" : fmt(table.back().tv_distance)}});
            break;
        }
    }

    const double wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    std::ofstream manifest(art.manifest);
    if (!manifest) throw std::runtime_error("cannot open manifest: " + art.manifest.string());
    manifest << "# run manifest\n";
    manifest << "code_version = " << kVersion << "\n";
    manifest << "config_hash = " << hash << "\n";
    manifest << "seed = " << config.seed << "\n";
    manifest << "wall_time_s = " << wall_s << "\n";
    manifest << "resolved_dt = " << fmt(config.resolved_dt()) << "\n";
    manifest << "resolved_sigma = " << fmt(config.resolved_sigma()) << "\n";
    manifest << "--- resolved config ---\n";
    manifest << serialize_config(config);
    return art;
}

}  // namespace abrlab
