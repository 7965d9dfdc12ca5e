#ifndef ABRLAB_DETECTOR_LIMIT_HPP
#define ABRLAB_DETECTOR_LIMIT_HPP

#include "abrlab/abr.hpp"

namespace abrlab {

struct LayerSpec {
    double L = 0.0;             // layer thickness
    double lambda_layer = 0.0;  // absorption rate inside the layer
    BoundaryCondition outer_bc = Neumann{};
};

/// Geometric sequence of layers sharing a fixed product lambda_n * L_n =
/// hbar * kappa_target / mass, thicknesses strictly decreasing.
struct LimitSequence {
    double kappa_target = 1.0;
    std::vector<LayerSpec> entries;
};

/// Step profile lambda(x) = lambda_layer on [x_max - L, x_max] (snapped to
/// nodes, half value at the inner edge node so the trapezoidal integral is
/// exactly lambda_layer * L_actual). Throws if the snapped layer is thinner
/// than 3 dx.
DetectorProfile layer_profile(const SpatialGrid& grid, const LayerSpec& spec,
                              double* L_actual = nullptr);

/// Grid extended past x_max by the snapped layer thickness, preserving dx,
/// so the detector layer sits outside the nominal domain.
SpatialGrid extend_grid_for_layer(const SpatialGrid& interior, double L);

/// Layers L_n = snap(L0 / 2^n), n = 0..levels-1, with lambda_n adjusted to
/// the snapped thickness so the product constraint holds exactly.
LimitSequence make_limit_sequence(double kappa_target, double L0, std::size_t levels, double dx,
                                  const PhysicalConstants& consts,
                                  const BoundaryCondition& outer_bc = Neumann{});

/// Imaginary-potential (soft detector) run: evolve with the layer profile
/// and a reflecting outer wall; per-bin detected mass is the integral of
/// lambda(x) |Psi|^2, attributed to the right boundary.
DetectionDistribution soft_detection_distribution(const WaveFunction& psi0,
                                                  const DetectorProfile& profile,
                                                  const PropagatorConfig& config,
                                                  std::size_t n_bins = 200,
                                                  double closure_tol = 1e-6);

struct ConvergenceRow {
    double L_nominal = 0.0;
    double L_actual = 0.0;
    double lambda = 0.0;
    double tv_distance = 0.0;
    double ks_distance = 0.0;
    double detected_mass_error = 0.0;
    bool resolvable = true;        // false when the layer is thinner than 3 dx
    bool tv_decreased = false;     // relative to the previous resolvable row
};

struct PacketSpec {
    double center = 0.0;
    double width = 1.0;
    double k0 = 0.0;
};

/// For each entry, run the soft-detector model on the extended grid and
/// compare its detection-time distribution against the ABR reference with
/// kappa_target on the interior grid. Under-resolved entries are flagged
/// and carried in the table, not dropped.
std::vector<ConvergenceRow> convergence_study(const PacketSpec& packet,
                                              const SpatialGrid& interior,
                                              const LimitSequence& seq,
                                              const PropagatorConfig& config,
                                              std::size_t n_bins = 200);

}  // namespace abrlab

#endif
