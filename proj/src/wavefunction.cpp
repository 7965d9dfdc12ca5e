#include "abrlab/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace abrlab {

WaveFunction::WaveFunction(SpatialGrid g, std::vector<Complex> v)
    : grid(g), values(std::move(v)) {
    if (values.size() != grid.n_points)
        throw std::invalid_argument("WaveFunction: value count must match grid");
    for (const Complex& z : values) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument("WaveFunction: non-finite amplitude");
    }
}

double squared_norm(const WaveFunction& psi) {
    const std::size_t n = psi.size();
    const double dx = psi.grid.dx();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += trapezoid_weight(i, n) * std::norm(psi.values[i]);
    return acc * dx;
}

std::vector<double> probability_current(const WaveFunction& psi, const PhysicalConstants& consts) {
    const std::size_t n = psi.size();
    const double dx = psi.grid.dx();
    const double scale = consts.hbar / consts.mass;
    std::vector<double> j(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex dpsi;
        if (i == 0)
            dpsi = (psi.values[1] - psi.values[0]) / dx;
        else if (i + 1 == n)
            dpsi = (psi.values[n - 1] - psi.values[n - 2]) / dx;
        else
            dpsi = (psi.values[i + 1] - psi.values[i - 1]) / (2.0 * dx);
        j[i] = scale * std::imag(std::conj(psi.values[i]) * dpsi);
    }
    return j;
}

double gaussian_density(double x, double sigma) {
    const double s2 = sigma * sigma;
    return std::exp(-x * x / (2.0 * s2)) / std::sqrt(2.0 * std::numbers::pi * s2);
}

std::vector<double> gaussian_convolve(const SpatialGrid& grid, const std::vector<double>& f,
                                      double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("gaussian_convolve: sigma must be positive");
    if (f.size() != grid.n_points)
        throw std::invalid_argument("gaussian_convolve: size mismatch");
    const std::size_t n = f.size();
    const double dx = grid.dx();
    const auto half_width = static_cast<std::size_t>(std::floor(8.0 * sigma / dx));
    std::vector<double> out(n, 0.0);
    // Column normalization: each source node j spreads exactly its own
    // trapezoidal mass over the window, so sum_i w_i out_i dx == sum_j w_j f_j dx.
    for (std::size_t j = 0; j < n; ++j) {
        if (f[j] == 0.0) continue;
        const std::size_t lo = j > half_width ? j - half_width : 0;
        const std::size_t hi = std::min(n - 1, j + half_width);
        double z = 0.0;
        for (std::size_t i = lo; i <= hi; ++i)
            z += trapezoid_weight(i, n) * gaussian_density(grid.node(i) - grid.node(j), sigma);
        z *= dx;
        const double mass = f[j] * trapezoid_weight(j, n) * dx;
        for (std::size_t i = lo; i <= hi; ++i)
            out[i] += mass * gaussian_density(grid.node(i) - grid.node(j), sigma) / z;
    }
    return out;
}

WaveFunction gaussian_packet(const SpatialGrid& grid, double center, double width, double k0) {
    if (width <= 0.0) throw std::invalid_argument("gaussian_packet: width must be positive");
    std::vector<Complex> v(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double x = grid.node(i);
        const double envelope = std::exp(-(x - center) * (x - center) / (4.0 * width * width));
        v[i] = envelope * std::exp(Complex(0.0, k0 * x));
    }
    WaveFunction psi(grid, std::move(v));
    normalize(psi);
    return psi;
}

void normalize(WaveFunction& psi) {
    const double n2 = squared_norm(psi);
    if (n2 <= 0.0) throw std::runtime_error("normalize: zero-norm state");
    const double s = 1.0 / std::sqrt(n2);
    for (Complex& z : psi.values) z *= s;
}

}  // namespace abrlab
