#ifndef ABRLAB_GRW_HPP
#define ABRLAB_GRW_HPP

#include <cstdint>
#include <random>

#include "abrlab/propagator.hpp"

namespace abrlab {

/// Original GRW process: spatially constant Poisson rate lambda0.
struct ConstantRate {
    double lambda0 = 0.0;
};

/// Variant with position-dependent rate lambda(x), sampled on grid nodes.
struct PositionDependentRate {
    std::vector<double> lambda;
};

using RateOperatorKind = std::variant<ConstantRate, PositionDependentRate>;

/// Collapse jump weighting. GaussianSqrt multiplies by g(x - X)^{1/2}
/// (the process's primary definition); RateOperator multiplies by the
/// rate operator itself, i.e. by g(x - X). Both renormalize afterwards.
enum class JumpConvention { GaussianSqrt, RateOperator };

struct CollapseEvent {
    double time = 0.0;
    double center = 0.0;
    double pre_norm = 1.0;  // squared norm of the unnormalized state just before the jump
};

struct GrwRunRecord {
    std::vector<CollapseEvent> events;  // times strictly increasing
    WaveFunction final_state;
    std::uint64_t seed = 0;
};

struct GrwConfig {
    double dt = 1e-3;
    double t_max = 1.0;
    BoundaryCondition bc_left = Neumann{};
    BoundaryCondition bc_right = Neumann{};
    PhysicalConstants consts{};
    double sigma = 1.0;
    JumpConvention jump = JumpConvention::GaussianSqrt;
    std::vector<double> V;  // optional external potential on grid nodes
};

using Rng = std::mt19937_64;

/// Uniform draw in (0, 1), 53-bit resolution. Deterministic across platforms.
double uniform01(Rng& rng);

/// Rate density lambda(x) (g * |psi|^2)(x) on the grid. psi need not be
/// normalized; its trapezoidal mass is what the density integrates to when
/// lambda is constant 1.
std::vector<double> collapse_rate_density(const WaveFunction& psi, const RateOperatorKind& kind,
                                          double sigma);

/// Trapezoidal integral of a grid-sampled density.
double integrate(const SpatialGrid& grid, const std::vector<double>& density);

/// Inverse-CDF draw from a grid-sampled density, linear interpolation of the
/// cumulative within a cell. Throws if the total rate vanishes.
double sample_from_density(const SpatialGrid& grid, const std::vector<double>& density, Rng& rng);

double sample_collapse_center(const WaveFunction& psi, const RateOperatorKind& kind, double sigma,
                              Rng& rng);

/// Gaussian collapse jump centered at `center`; output has unit norm.
WaveFunction apply_collapse(const WaveFunction& psi, double center, double sigma,
                            JumpConvention jump = JumpConvention::GaussianSqrt);

/// Full GRW trajectory on [0, t_max]. ConstantRate: unitary evolution
/// between exponentially spaced collapse times. PositionDependentRate:
/// non-unitary (imaginary-potential) evolution between collapses, collapse
/// times sampled by inverting the survival function ||Psi_t||^2 against a
/// uniform draw, log-linear interpolation within a step.
GrwRunRecord run_grw(const WaveFunction& psi0, const RateOperatorKind& kind,
                     const GrwConfig& config, std::uint64_t seed);

/// Position-dependent process truncated at the first collapse.
DetectionOutcome first_detection(const WaveFunction& psi0, const PositionDependentRate& kind,
                                 const GrwConfig& config, std::uint64_t seed);

/// N independent first-detection outcomes with seeds base_seed + i. The
/// pre-first-jump evolution is deterministic, so it is computed once and
/// shared; outcome i is bit-identical to first_detection(..., base_seed + i).
std::vector<DetectionOutcome> first_detection_ensemble(const WaveFunction& psi0,
                                                       const PositionDependentRate& kind,
                                                       const GrwConfig& config, std::size_t n_runs,
                                                       std::uint64_t base_seed);

}  // namespace abrlab

#endif
