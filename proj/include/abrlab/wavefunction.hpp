#ifndef ABRLAB_WAVEFUNCTION_HPP
#define ABRLAB_WAVEFUNCTION_HPP

#include <complex>
#include <vector>

#include "abrlab/grid.hpp"

namespace abrlab {

using Complex = std::complex<double>;

/// Complex amplitudes sampled on the nodes of a SpatialGrid.
struct WaveFunction {
    SpatialGrid grid;
    std::vector<Complex> values;

    WaveFunction() = default;
    WaveFunction(SpatialGrid g, std::vector<Complex> v);

    std::size_t size() const { return values.size(); }
};

/// Trapezoidal squared norm: sum_i w_i |psi_i|^2 dx with w = (1/2, 1, ..., 1, 1/2).
double squared_norm(const WaveFunction& psi);

/// Probability current (hbar/m) Im(psi* D psi); central differences in the
/// interior, one-sided at the endpoints. Positive values mean flow toward +x.
std::vector<double> probability_current(const WaveFunction& psi, const PhysicalConstants& consts);

/// Convolution with the unit-mass 1D Gaussian of width sigma, by direct
/// quadrature truncated at |x| > 8 sigma. The discrete kernel is normalized
/// per source node, so total trapezoidal mass is preserved exactly (mass
/// that would leak past a grid edge is folded back); in the degenerate
/// regime sigma << dx the kernel collapses to the identity and f is
/// returned unchanged.
std::vector<double> gaussian_convolve(const SpatialGrid& grid, const std::vector<double>& f,
                                      double sigma);

/// Unit-mass Gaussian density value g(x) = (2 pi sigma^2)^{-1/2} exp(-x^2 / 2 sigma^2).
double gaussian_density(double x, double sigma);

/// Gaussian packet psi(x) = N exp(-(x-center)^2 / 4 width^2 + i k0 x),
/// normalized on the grid so that squared_norm == 1.
WaveFunction gaussian_packet(const SpatialGrid& grid, double center, double width, double k0);

/// In-place rescale to unit trapezoidal norm. Throws if the norm is zero.
void normalize(WaveFunction& psi);

}  // namespace abrlab

#endif
