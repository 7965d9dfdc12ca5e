#include <doctest.h>

#include <cmath>
#include <numbers>

#include "abrlab/propagator.hpp"

using namespace abrlab;

namespace {

Complex overlap(const WaveFunction& a, const WaveFunction& b) {
    Complex acc(0.0);
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
        acc += trapezoid_weight(i, n) * std::conj(a.values[i]) * b.values[i];
    return acc * a.grid.dx();
}

}  // namespace

TEST_CASE("assemble: Dirichlet box reproduces the particle-in-a-box spectrum") {
    const double L = 1.0;
    SpatialGrid grid(0.0, L, 201);
    PhysicalConstants consts;
    const TridiagonalOperator op = assemble(grid, {}, Dirichlet{}, Dirichlet{}, consts);
    for (int mode = 1; mode <= 3; ++mode) {
        std::vector<Complex> v(grid.n_points);
        for (std::size_t i = 0; i < grid.n_points; ++i)
            v[i] = std::sin(mode * std::numbers::pi * grid.node(i) / L);
        const auto av = op.apply(v);
        // Rayleigh quotient on interior nodes vs hbar^2 pi^2 n^2 / (2 m L^2)
        Complex num(0.0), den(0.0);
        for (std::size_t i = 1; i + 1 < grid.n_points; ++i) {
            num += std::conj(v[i]) * av[i];
            den += std::conj(v[i]) * v[i];
        }
        const double analytic =
            consts.hbar * consts.hbar * std::numbers::pi * std::numbers::pi * mode * mode /
            (2.0 * consts.mass * L * L);
        CHECK(std::abs(num / den - analytic) / analytic < 1e-3);
    }
}

TEST_CASE("assemble: reflecting operators are Hermitian in the trapezoid inner product") {
    SpatialGrid grid(0.0, 4.0, 65);
    DetectorProfile profile;
    profile.V.assign(grid.n_points, 0.0);
    for (std::size_t i = 0; i < grid.n_points; ++i) profile.V[i] = 0.3 * grid.node(i);
    for (BoundaryCondition bc :
         {BoundaryCondition(Neumann{}), BoundaryCondition(Robin{0.7})}) {
        const TridiagonalOperator op = assemble(grid, profile, bc, bc, PhysicalConstants{});
        const std::size_t n = op.size();
        for (std::size_t i = 0; i < n; ++i) CHECK(op.diag[i].imag() == 0.0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double wi = trapezoid_weight(i, n);
            const double wj = trapezoid_weight(i + 1, n);
            CHECK(std::abs(wi * op.upper[i] - wj * op.lower[i + 1]) < 1e-14);
        }
    }
}

TEST_CASE("assemble: constant lambda shifts the diagonal by -i hbar lambda / 2 exactly") {
    SpatialGrid grid(0.0, 2.0, 33);
    PhysicalConstants consts(2.0, 0.5);
    DetectorProfile none;
    DetectorProfile damped;
    damped.lambda.assign(grid.n_points, 1.3);
    const auto a = assemble(grid, none, Neumann{}, Neumann{}, consts);
    const auto b = assemble(grid, damped, Neumann{}, Neumann{}, consts);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(b.diag[i] - a.diag[i] == Complex(0.0, -0.5 * consts.hbar * 1.3));
        CHECK(b.lower[i] == a.lower[i]);
        CHECK(b.upper[i] == a.upper[i]);
    }
}

TEST_CASE("assemble: rejects absorbing kappa <= 0") {
    SpatialGrid grid(0.0, 1.0, 11);
    CHECK_THROWS(assemble(grid, {}, Absorbing{0.0}, Neumann{}, PhysicalConstants{}));
    CHECK_THROWS(assemble(grid, {}, Neumann{}, Absorbing{-2.0}, PhysicalConstants{}));
}

TEST_CASE("step: Crank-Nicolson is unitary for reflecting boxes over 1000 steps") {
    SpatialGrid grid(0.0, 10.0, 201);
    PhysicalConstants consts;
    const TridiagonalOperator op = assemble(grid, {}, Neumann{}, Neumann{}, consts);
    WaveFunction psi = gaussian_packet(grid, 5.0, 1.0, 1.0);
    const double n0 = squared_norm(psi);
    for (int k = 0; k < 1000; ++k) psi = step(psi, op, 0.002, consts);
    CHECK(std::abs(squared_norm(psi) - n0) < 1e-12);
}

TEST_CASE("step: box ground state returns to itself after one eigenperiod") {
    const double L = 1.0;
    SpatialGrid grid(0.0, L, 101);
    PhysicalConstants consts;
    const TridiagonalOperator op = assemble(grid, {}, Dirichlet{}, Dirichlet{}, consts);

    std::vector<Complex> v(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i)
        v[i] = std::sin(std::numbers::pi * grid.node(i) / L);
    WaveFunction psi0(grid, std::move(v));
    normalize(psi0);

    // discrete eigenvalue of the sine mode, so the period matches the operator
    const double dx = grid.dx();
    const double c = consts.hbar * consts.hbar / (2.0 * consts.mass * dx * dx);
    const double energy = 2.0 * c * (1.0 - std::cos(std::numbers::pi * dx / L));
    const double period = 2.0 * std::numbers::pi * consts.hbar / energy;
    const double dt = 1e-4;
    const auto n_steps = static_cast<std::size_t>(std::llround(period / dt));

    WaveFunction psi = psi0;
    for (std::size_t k = 0; k < n_steps; ++k) psi = step(psi, op, period / n_steps, consts);
    const Complex ov = overlap(psi0, psi);
    CHECK(std::abs(ov) > 1.0 - 1e-10);     // stays the eigenstate
    CHECK(ov.real() > 1.0 - 1e-6);         // and the phase has wound a full turn
}

TEST_CASE("step: momentum-matched packet is almost fully absorbed at kappa = k") {
    const double kappa = 2.0;
    SpatialGrid grid(0.0, 20.0, 401);
    PhysicalConstants consts;
    const TridiagonalOperator op =
        assemble(grid, {}, Absorbing{kappa}, Absorbing{kappa}, consts);
    WaveFunction psi = gaussian_packet(grid, 5.0, 1.5, kappa);
    const double dt = 2.5e-3;
    for (double t = 0.0; t < 20.0; t += dt) psi = step(psi, op, dt, consts);
    CHECK(squared_norm(psi) < 1e-2);
}

TEST_CASE("step: contraction with absorbing boundary or imaginary potential") {
    SpatialGrid grid(0.0, 10.0, 151);
    PhysicalConstants consts;
    DetectorProfile profile;
    profile.lambda.assign(grid.n_points, 0.0);
    for (std::size_t i = 100; i < grid.n_points; ++i) profile.lambda[i] = 2.0;
    const TridiagonalOperator op =
        assemble(grid, profile, Dirichlet{}, Absorbing{1.5}, consts);
    WaveFunction psi = gaussian_packet(grid, 3.0, 1.0, 1.5);
    double prev = squared_norm(psi);
    for (int k = 0; k < 400; ++k) {
        psi = step(psi, op, 0.004, consts);
        const double now = squared_norm(psi);
        CHECK(now <= prev + 1e-12);
        prev = now;
    }
}

TEST_CASE("evolve: observer sees a constant norm series in the Hermitian case") {
    SpatialGrid grid(0.0, 8.0, 101);
    PropagatorConfig cfg;
    cfg.dt = 0.005;
    cfg.t_max = 0.5;
    cfg.bc_left = Neumann{};
    cfg.bc_right = Neumann{};
    WaveFunction psi0 = gaussian_packet(grid, 4.0, 0.8, 0.0);
    std::vector<double> norms;
    evolve(psi0, cfg, {}, [&](std::size_t, double, const WaveFunction&, const WaveFunction& a) {
        norms.push_back(squared_norm(a));
    });
    CHECK(norms.size() == cfg.n_steps());
    for (double n2 : norms) CHECK(n2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolve: norm series is monotone nonincreasing under absorption") {
    SpatialGrid grid(0.0, 8.0, 101);
    PropagatorConfig cfg;
    cfg.dt = 0.005;
    cfg.t_max = 1.0;
    cfg.bc_left = Neumann{};
    cfg.bc_right = Neumann{};
    DetectorProfile profile;
    profile.lambda.assign(grid.n_points, 0.4);
    WaveFunction psi0 = gaussian_packet(grid, 4.0, 0.8, 0.0);
    std::vector<double> norms{1.0};
    evolve(psi0, cfg, profile,
           [&](std::size_t, double, const WaveFunction&, const WaveFunction& a) {
               norms.push_back(squared_norm(a));
           });
    for (std::size_t k = 1; k < norms.size(); ++k) CHECK(norms[k] <= norms[k - 1] + 1e-12);
}

TEST_CASE("evolve: rejects t_max < dt") {
    SpatialGrid grid(0.0, 1.0, 11);
    PropagatorConfig cfg;
    cfg.dt = 0.1;
    cfg.t_max = 0.05;
    WaveFunction psi0 = gaussian_packet(grid, 0.5, 0.1, 0.0);
    CHECK_THROWS(evolve(psi0, cfg, {}));
}

TEST_CASE("step: second-order accuracy in time and space") {
    PhysicalConstants consts;
    const double kappa = 1.5;
    auto surviving_norm = [&](std::size_t n, double dt) {
        SpatialGrid grid(0.0, 10.0, n);
        const TridiagonalOperator op =
            assemble(grid, {}, Dirichlet{}, Absorbing{kappa}, consts);
        WaveFunction psi = gaussian_packet(grid, 4.0, 0.8, kappa);
        const auto steps = static_cast<std::size_t>(std::llround(2.0 / dt));
        for (std::size_t k = 0; k < steps; ++k) psi = step(psi, op, dt, consts);
        return squared_norm(psi);
    };

    SUBCASE("time order: dx fixed and fine") {
        const double ref = surviving_norm(401, 0.04 / 16.0);
        const double e1 = std::abs(surviving_norm(401, 0.04) - ref);
        const double e2 = std::abs(surviving_norm(401, 0.02) - ref);
        CHECK(e1 / e2 > 2.5);
        CHECK(e1 / e2 < 6.0);
    }
    SUBCASE("space order: dt fixed and fine") {
        const double ref = surviving_norm(1601, 1e-3);
        const double e1 = std::abs(surviving_norm(101, 1e-3) - ref);
        const double e2 = std::abs(surviving_norm(201, 1e-3) - ref);
        CHECK(e1 / e2 > 2.5);
        CHECK(e1 / e2 < 6.0);
    }
}

TEST_CASE("thomas_solve: rejects a singular system") {
    std::vector<Complex> lower{0.0, 0.0};
    std::vector<Complex> diag{1.0, 0.0};
    std::vector<Complex> upper{0.0, 0.0};
    CHECK_THROWS(thomas_solve(lower, diag, upper, {Complex(1.0), Complex(1.0)}));
}
