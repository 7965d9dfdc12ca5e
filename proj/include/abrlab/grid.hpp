#ifndef ABRLAB_GRID_HPP
#define ABRLAB_GRID_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace abrlab {

/// Uniform 1D grid on [x_min, x_max], endpoints included.
struct SpatialGrid {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t n_points = 3;

    SpatialGrid() = default;
    SpatialGrid(double xmin, double xmax, std::size_t n) : x_min(xmin), x_max(xmax), n_points(n) {
        if (!(x_max > x_min)) throw std::invalid_argument("SpatialGrid: x_max must exceed x_min");
        if (n_points < 3) throw std::invalid_argument("SpatialGrid: need at least 3 points");
    }

    double dx() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
    double node(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
    double length() const { return x_max - x_min; }
    std::size_t size() const { return n_points; }

    std::vector<double> nodes() const {
        std::vector<double> xs(n_points);
        for (std::size_t i = 0; i < n_points; ++i) xs[i] = node(i);
        xs.back() = x_max;
        return xs;
    }

    bool operator==(const SpatialGrid&) const = default;
};

struct PhysicalConstants {
    double hbar = 1.0;
    double mass = 1.0;

    PhysicalConstants() = default;
    PhysicalConstants(double h, double m) : hbar(h), mass(m) {
        if (hbar <= 0.0 || mass <= 0.0)
            throw std::invalid_argument("PhysicalConstants: hbar and mass must be positive");
    }

    bool operator==(const PhysicalConstants&) const = default;
};

/// Trapezoidal end-point weight: 1/2 at the first and last node, 1 elsewhere.
inline double trapezoid_weight(std::size_t i, std::size_t n) {
    return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

}  // namespace abrlab

#endif
