#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "abrlab/wavefunction.hpp"

using namespace abrlab;

namespace {

WaveFunction analytic_gaussian(const SpatialGrid& grid, double center, double width) {
    // (2 pi w^2)^{-1/4} exp(-(x - c)^2 / 4 w^2), normalized in the continuum
    const double amp = std::pow(2.0 * std::numbers::pi * width * width, -0.25);
    std::vector<Complex> v(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double x = grid.node(i);
        v[i] = amp * std::exp(-(x - center) * (x - center) / (4.0 * width * width));
    }
    return WaveFunction(grid, std::move(v));
}

}  // namespace

TEST_CASE("squared_norm: constant psi=1 on [0,1] is exactly 1") {
    for (std::size_t n : {3u, 17u, 100u}) {
        SpatialGrid grid(0.0, 1.0, n);
        WaveFunction psi(grid, std::vector<Complex>(n, Complex(1.0)));
        CHECK(squared_norm(psi) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("squared_norm: zero state has zero norm") {
    SpatialGrid grid(-2.0, 3.0, 50);
    WaveFunction psi(grid, std::vector<Complex>(50, Complex(0.0)));
    CHECK(squared_norm(psi) == 0.0);
}

TEST_CASE("squared_norm: analytically normalized Gaussian on a wide grid") {
    SpatialGrid grid(-20.0, 20.0, 801);
    WaveFunction psi = analytic_gaussian(grid, 0.0, 1.0);
    CHECK(std::abs(squared_norm(psi) - 1.0) < 1e-8);
}

TEST_CASE("squared_norm: trapezoid converges at second order") {
    // state with non-vanishing endpoint derivatives so the O(dx^2) term shows
    const double exact = (std::exp(2.0) - 1.0) / 2.0;
    auto error_at = [&](std::size_t n) {
        SpatialGrid grid(0.0, 1.0, n);
        std::vector<Complex> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = std::exp(grid.node(i)) / std::sqrt(exact);
        return std::abs(squared_norm(WaveFunction(grid, std::move(v))) - 1.0);
    };
    const double e1 = error_at(51);
    const double e2 = error_at(101);
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
}

TEST_CASE("current: plane waves carry +-hbar k / m") {
    SpatialGrid grid(0.0, 10.0, 501);
    PhysicalConstants consts;
    const double k = 2.0;
    const double dx = grid.dx();
    for (double sign : {1.0, -1.0}) {
        std::vector<Complex> v(grid.n_points);
        for (std::size_t i = 0; i < grid.n_points; ++i)
            v[i] = std::exp(Complex(0.0, sign * k * grid.node(i)));
        const auto j = probability_current(WaveFunction(grid, std::move(v)), consts);
        const double tol = k * k * k * dx * dx / 6.0 * 1.5;
        for (std::size_t i = 1; i + 1 < grid.n_points; ++i)
            CHECK(std::abs(j[i] - sign * k) < tol);
    }
}

TEST_CASE("current: real-valued state carries none") {
    SpatialGrid grid(0.0, 5.0, 200);
    std::vector<Complex> v(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i)
        v[i] = std::sin(1.7 * grid.node(i)) + 0.3;
    const auto j = probability_current(WaveFunction(grid, std::move(v)), PhysicalConstants{});
    for (double ji : j) CHECK(ji == 0.0);
}

TEST_CASE("current: invariant under a global phase") {
    SpatialGrid grid(0.0, 5.0, 129);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> v(grid.n_points);
    for (auto& z : v) z = Complex(u(rng), u(rng));
    WaveFunction psi(grid, v);
    const Complex phase = std::exp(Complex(0.0, 0.7713));
    for (auto& z : v) z *= phase;
    WaveFunction psi2(grid, v);
    const auto j1 = probability_current(psi, PhysicalConstants{});
    const auto j2 = probability_current(psi2, PhysicalConstants{});
    for (std::size_t i = 0; i < j1.size(); ++i)
        CHECK(j1[i] == doctest::Approx(j2[i]).epsilon(1e-12));
}

TEST_CASE("gaussian_convolve: constant input far from edges stays constant") {
    SpatialGrid grid(0.0, 20.0, 401);
    const double sigma = 0.25;  // 5 dx
    std::vector<double> f(grid.n_points, 3.0);
    const auto out = gaussian_convolve(grid, f, sigma);
    for (std::size_t i = 100; i < 300; ++i) CHECK(out[i] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("gaussian_convolve: unit-mass spike reproduces the sampled kernel") {
    SpatialGrid grid(-10.0, 10.0, 801);
    const double sigma = 0.5;
    const std::size_t j0 = 400;  // x = 0
    std::vector<double> f(grid.n_points, 0.0);
    f[j0] = 1.0 / grid.dx();  // trapezoidal mass 1
    const auto out = gaussian_convolve(grid, f, sigma);
    for (std::size_t i = 350; i <= 450; ++i) {
        const double expected = gaussian_density(grid.node(i), sigma);
        CHECK(out[i] == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("gaussian_convolve: degenerate sigma << dx leaves f unchanged") {
    SpatialGrid grid(0.0, 1.0, 101);
    std::vector<double> f(grid.n_points);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.0 + std::sin(3.0 * grid.node(i));
    const auto out = gaussian_convolve(grid, f, 1e-6);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(out[i] == doctest::Approx(f[i]).epsilon(1e-10));
}

TEST_CASE("gaussian_convolve: nonnegative in, nonnegative out, mass preserved") {
    SpatialGrid grid(0.0, 30.0, 601);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> f(grid.n_points, 0.0);
    for (std::size_t i = 150; i < 450; ++i) f[i] = u(rng);  // compact support away from edges
    const auto out = gaussian_convolve(grid, f, 0.3);
    double mass_in = 0.0, mass_out = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(out[i] >= 0.0);
        mass_in += trapezoid_weight(i, f.size()) * f[i];
        mass_out += trapezoid_weight(i, f.size()) * out[i];
    }
    CHECK(mass_in * grid.dx() == doctest::Approx(mass_out * grid.dx()).epsilon(1e-10));
}

TEST_CASE("domain type invariants are enforced") {
    CHECK_THROWS(SpatialGrid(1.0, 0.0, 10));
    CHECK_THROWS(SpatialGrid(0.0, 1.0, 2));
    CHECK_THROWS(PhysicalConstants(0.0, 1.0));
    CHECK_THROWS(WaveFunction(SpatialGrid(0.0, 1.0, 5), std::vector<Complex>(4)));
    std::vector<Complex> bad(5, Complex(1.0));
    bad[2] = Complex(std::nan(""), 0.0);
    CHECK_THROWS(WaveFunction(SpatialGrid(0.0, 1.0, 5), bad));
}
