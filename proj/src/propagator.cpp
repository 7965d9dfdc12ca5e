#include "abrlab/propagator.hpp"

#include <cmath>

namespace abrlab {

namespace {

struct BoundaryRow {
    Complex diag_shift;  // added to 2c + V - i hbar lambda / 2
    Complex coupling;    // off-diagonal toward the interior
    bool dirichlet;
};

// Ghost-node elimination at second order. `c` is hbar^2 / (2 m dx^2).
// Outward-normal sign is already folded in: both ends produce the same row.
BoundaryRow boundary_row(const BoundaryCondition& bc, double c, double dx) {
    return std::visit(
        [&](const auto& b) -> BoundaryRow {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Dirichlet>) {
                return {Complex(0.0), Complex(0.0), true};
            } else if constexpr (std::is_same_v<T, Neumann>) {
                return {Complex(0.0), Complex(-2.0 * c), false};
            } else if constexpr (std::is_same_v<T, Absorbing>) {
                if (b.kappa <= 0.0)
                    throw std::invalid_argument("Absorbing boundary: kappa must be positive");
                return {Complex(0.0, -2.0 * c * b.kappa * dx), Complex(-2.0 * c), false};
            } else {
                return {Complex(-2.0 * c * b.alpha * dx), Complex(-2.0 * c), false};
            }
        },
        bc);
}

}  // namespace

WaveFunction project_onto_boundary(WaveFunction psi, const BoundaryCondition& bc_left,
                                   const BoundaryCondition& bc_right) {
    if (psi.size() == 0) return psi;
    if (std::holds_alternative<Dirichlet>(bc_left)) psi.values.front() = Complex(0.0);
    if (std::holds_alternative<Dirichlet>(bc_right)) psi.values.back() = Complex(0.0);
    return psi;
}

std::vector<Complex> TridiagonalOperator::apply(const std::vector<Complex>& x) const {
    const std::size_t n = size();
    std::vector<Complex> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc = diag[i] * x[i];
        if (i > 0) acc += lower[i] * x[i - 1];
        if (i + 1 < n) acc += upper[i] * x[i + 1];
        y[i] = acc;
    }
    return y;
}

TridiagonalOperator assemble(const SpatialGrid& grid, const DetectorProfile& profile,
                             const BoundaryCondition& bc_left, const BoundaryCondition& bc_right,
                             const PhysicalConstants& consts) {
    const std::size_t n = grid.n_points;
    profile.validate(n);
    const double dx = grid.dx();
    const double c = consts.hbar * consts.hbar / (2.0 * consts.mass * dx * dx);

    auto V = [&](std::size_t i) { return profile.V.empty() ? 0.0 : profile.V[i]; };
    auto lam = [&](std::size_t i) { return profile.lambda.empty() ? 0.0 : profile.lambda[i]; };

    TridiagonalOperator op;
    op.lower.assign(n, Complex(0.0));
    op.diag.assign(n, Complex(0.0));
    op.upper.assign(n, Complex(0.0));
    for (std::size_t i = 0; i < n; ++i)
        op.diag[i] = Complex(2.0 * c + V(i), -0.5 * consts.hbar * lam(i));
    for (std::size_t i = 1; i + 1 < n; ++i) {
        op.lower[i] = Complex(-c);
        op.upper[i] = Complex(-c);
    }

    const BoundaryRow left = boundary_row(bc_left, c, dx);
    const BoundaryRow right = boundary_row(bc_right, c, dx);
    op.dirichlet_left = left.dirichlet;
    op.dirichlet_right = right.dirichlet;
    if (left.dirichlet) {
        op.upper[0] = Complex(0.0);
        op.lower[1] = Complex(0.0);
    } else {
        op.diag[0] += left.diag_shift;
        op.upper[0] = left.coupling;
        op.lower[1] = Complex(-c);
    }
    if (right.dirichlet) {
        op.lower[n - 1] = Complex(0.0);
        op.upper[n - 2] = Complex(0.0);
    } else {
        op.diag[n - 1] += right.diag_shift;
        op.lower[n - 1] = right.coupling;
        op.upper[n - 2] = Complex(-c);
    }
    return op;
}

std::vector<Complex> thomas_solve(const std::vector<Complex>& lower,
                                  const std::vector<Complex>& diag,
                                  const std::vector<Complex>& upper, std::vector<Complex> rhs) {
    const std::size_t n = diag.size();
    std::vector<Complex> cp(n);
    Complex pivot = diag[0];
    if (std::abs(pivot) < 1e-300) throw std::runtime_error("thomas_solve: singular system");
    cp[0] = upper[0] / pivot;
    rhs[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i] * cp[i - 1];
        if (std::abs(pivot) < 1e-300) throw std::runtime_error("thomas_solve: singular system");
        cp[i] = upper[i] / pivot;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= cp[i] * rhs[i + 1];
    return rhs;
}

WaveFunction step(const WaveFunction& psi, const TridiagonalOperator& op, double dt,
                  const PhysicalConstants& consts) {
    const std::size_t n = psi.size();
    if (n != op.size()) throw std::invalid_argument("step: dimension mismatch");
    const Complex z(0.0, 0.5 * dt / consts.hbar);

    std::vector<Complex> in = psi.values;
    if (op.dirichlet_left) in[0] = Complex(0.0);
    if (op.dirichlet_right) in[n - 1] = Complex(0.0);

    // rhs = (1 - z A) psi
    std::vector<Complex> ax = op.apply(in);
    std::vector<Complex> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = in[i] - z * ax[i];

    // lhs = (1 + z A)
    std::vector<Complex> dl(n), dd(n), du(n);
    for (std::size_t i = 0; i < n; ++i) {
        dl[i] = z * op.lower[i];
        dd[i] = Complex(1.0) + z * op.diag[i];
        du[i] = z * op.upper[i];
    }
    std::vector<Complex> out = thomas_solve(dl, dd, du, std::move(rhs));
    if (op.dirichlet_left) out[0] = Complex(0.0);
    if (op.dirichlet_right) out[n - 1] = Complex(0.0);

    WaveFunction next;
    next.grid = psi.grid;
    next.values = std::move(out);
    return next;
}

WaveFunction evolve(const WaveFunction& psi0, const PropagatorConfig& config,
                    const DetectorProfile& profile, const StepObserver& observer) {
    config.validate();
    const TridiagonalOperator op =
        assemble(psi0.grid, profile, config.bc_left, config.bc_right, config.consts);
    const std::size_t n_steps = config.n_steps();
    WaveFunction psi = psi0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        WaveFunction next = step(psi, op, config.dt, config.consts);
        if (observer) {
            WaveFunction mid;
            mid.grid = psi.grid;
            mid.values.resize(psi.size());
            for (std::size_t i = 0; i < psi.size(); ++i)
                mid.values[i] = 0.5 * (psi.values[i] + next.values[i]);
            observer(k, (static_cast<double>(k) + 0.5) * config.dt, mid, next);
        }
        psi = std::move(next);
    }
    return psi;
}

}  // namespace abrlab
