#ifndef ABRLAB_CONFIG_HPP
#define ABRLAB_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abrlab/propagator.hpp"

namespace abrlab {

enum class Model { Abr, Soft, GrwConstant, GrwFirstDetection, LimitStudy };

const char* to_string(Model m);

/// Fully resolved experiment description. Defaults are documented in the
/// schema (see parse_config); dt and sigma default to the grid-derived
/// values dx^2 m / hbar and 5 dx when not given explicitly.
struct ExperimentConfig {
    Model model = Model::Abr;

    double x_min = 0.0;
    double x_max = 20.0;
    std::size_t n_points = 401;

    double hbar = 1.0;
    double mass = 1.0;
    double V0 = 0.0;

    double packet_center = 5.0;
    double packet_width = 1.0;
    double packet_k0 = 2.0;
    std::string state_file;  // optional two-column (real, imag) node file

    double dt = 0.0;    // 0 means "use the dx^2 m / hbar default"
    double t_max = 10.0;
    std::size_t n_bins = 200;
    std::string bc_left = "dirichlet";   // dirichlet | neumann | robin
    std::string bc_right = "dirichlet";
    double robin_alpha = 0.0;

    std::optional<double> kappa_left;
    std::optional<double> kappa_right;

    double sigma = 0.0;  // 0 means "use the 5 dx default"
    double lambda0 = 0.0;

    double layer_L = 0.0;
    double layer_lambda = 0.0;
    std::string outer_bc = "neumann";  // neumann | robin

    double kappa_target = 0.0;
    double layer_L0 = 0.0;
    std::size_t layer_levels = 6;

    std::size_t ensemble_n = 1000;
    std::uint64_t seed = 1;

    std::string output_dir = "out";

    double resolved_dt() const;
    double resolved_sigma() const;
    SpatialGrid grid() const { return SpatialGrid(x_min, x_max, n_points); }
    PhysicalConstants consts() const { return PhysicalConstants(hbar, mass); }
    BoundaryCondition boundary(const std::string& name) const;

    bool operator==(const ExperimentConfig&) const = default;
};

struct ParseResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors;  // all of them, not just the first
    bool ok() const { return errors.empty() && config.has_value(); }
};

/// Parse the key-value experiment format: one `key = value` per line,
/// `#` starts a comment. Unknown keys, duplicate keys (both occurrences
/// reported), missing required fields and out-of-range values are all
/// collected into `errors`.
ParseResult parse_config(const std::string& text);

/// Canonical text form; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const ExperimentConfig& config);

/// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string config_hash(const ExperimentConfig& config);

}  // namespace abrlab

#endif
