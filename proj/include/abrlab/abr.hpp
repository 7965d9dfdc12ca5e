#ifndef ABRLAB_ABR_HPP
#define ABRLAB_ABR_HPP

#include "abrlab/propagator.hpp"

namespace abrlab {

/// Absorbing boundary rule: evolve under the absorbing boundary condition
/// and convert the outward boundary current n.j = (hbar kappa / m) |psi|^2
/// into the binned detection-time/place distribution. Endpoints with a
/// kappa set in `profile` get the absorbing condition; the other endpoint
/// keeps the condition from `config`. Throws if accumulated mass plus the
/// surviving norm drifts from the initial norm by more than `closure_tol`.
DetectionDistribution abr_distribution(const WaveFunction& psi0, const DetectorProfile& profile,
                                       const PropagatorConfig& config, std::size_t n_bins = 200,
                                       double closure_tol = 1e-6);

}  // namespace abrlab

#endif
