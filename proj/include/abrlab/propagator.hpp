#ifndef ABRLAB_PROPAGATOR_HPP
#define ABRLAB_PROPAGATOR_HPP

#include <cmath>
#include <functional>
#include <variant>

#include "abrlab/detector.hpp"
#include "abrlab/wavefunction.hpp"

namespace abrlab {

struct Dirichlet {};
struct Neumann {};
struct Absorbing {
    double kappa = 1.0;  // must be > 0
};
struct Robin {
    double alpha = 0.0;
};

using BoundaryCondition = std::variant<Dirichlet, Neumann, Absorbing, Robin>;

inline bool is_absorbing(const BoundaryCondition& bc) {
    return std::holds_alternative<Absorbing>(bc);
}

/// Discretization of H - (i hbar / 2) lambda(x): three-point Laplacian in
/// the interior, boundary conditions imposed by second-order ghost-node
/// elimination. Hermitian with respect to the trapezoid-weighted inner
/// product when lambda == 0 and both ends are reflecting.
struct TridiagonalOperator {
    std::vector<Complex> lower;  // size n, lower[0] unused
    std::vector<Complex> diag;   // size n
    std::vector<Complex> upper;  // size n, upper[n-1] unused
    bool dirichlet_left = false;
    bool dirichlet_right = false;

    std::size_t size() const { return diag.size(); }

    /// y = A x
    std::vector<Complex> apply(const std::vector<Complex>& x) const;
};

struct PropagatorConfig {
    double dt = 1e-3;
    double t_max = 1.0;
    BoundaryCondition bc_left = Dirichlet{};
    BoundaryCondition bc_right = Dirichlet{};
    PhysicalConstants consts{};

    void validate() const {
        if (dt <= 0.0) throw std::invalid_argument("PropagatorConfig: dt must be positive");
        if (t_max < dt) throw std::invalid_argument("PropagatorConfig: t_max must be >= dt");
    }
    std::size_t n_steps() const {
        return static_cast<std::size_t>(std::llround(t_max / dt));
    }
};

/// Zero the endpoint amplitudes held fixed by a Dirichlet condition. States
/// that already satisfy the boundary conditions come back unchanged.
WaveFunction project_onto_boundary(WaveFunction psi, const BoundaryCondition& bc_left,
                                   const BoundaryCondition& bc_right);

TridiagonalOperator assemble(const SpatialGrid& grid, const DetectorProfile& profile,
                             const BoundaryCondition& bc_left, const BoundaryCondition& bc_right,
                             const PhysicalConstants& consts);

/// Solve the tridiagonal system (Thomas algorithm). Throws on a vanishing pivot.
std::vector<Complex> thomas_solve(const std::vector<Complex>& lower,
                                  const std::vector<Complex>& diag,
                                  const std::vector<Complex>& upper, std::vector<Complex> rhs);

/// One Crank-Nicolson update (1 + i dt A / 2 hbar) psi' = (1 - i dt A / 2 hbar) psi.
WaveFunction step(const WaveFunction& psi, const TridiagonalOperator& op, double dt,
                  const PhysicalConstants& consts);

/// Per-step observer. `mid` is the Crank-Nicolson midpoint state
/// (psi + psi') / 2 at time t_mid; flux and absorption integrals evaluated
/// on it close the discrete norm balance to machine precision.
using StepObserver =
    std::function<void(std::size_t step_index, double t_mid, const WaveFunction& mid,
                       const WaveFunction& after)>;

/// Repeated step() from t = 0 to t_max. Deterministic given its inputs.
WaveFunction evolve(const WaveFunction& psi0, const PropagatorConfig& config,
                    const DetectorProfile& profile, const StepObserver& observer = {});

}  // namespace abrlab

#endif
