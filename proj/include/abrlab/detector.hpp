#ifndef ABRLAB_DETECTOR_HPP
#define ABRLAB_DETECTOR_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "abrlab/grid.hpp"

namespace abrlab {

/// Everything that defines a detector model: real potential V(x), absorption
/// rate lambda(x), per-endpoint absorbing-boundary wavenumbers, collapse
/// width sigma and constant collapse rate lambda0.
struct DetectorProfile {
    std::vector<double> V;       // sampled on grid nodes; empty means V == 0
    std::vector<double> lambda;  // sampled on grid nodes; empty means lambda == 0
    std::optional<double> kappa_left;
    std::optional<double> kappa_right;
    double sigma = 1.0;
    double lambda0 = 0.0;

    void validate(std::size_t n_points) const {
        if (!V.empty() && V.size() != n_points)
            throw std::invalid_argument("DetectorProfile: V size mismatch");
        if (!lambda.empty() && lambda.size() != n_points)
            throw std::invalid_argument("DetectorProfile: lambda size mismatch");
        for (double l : lambda)
            if (l < 0.0) throw std::invalid_argument("DetectorProfile: lambda must be >= 0");
        if (sigma <= 0.0) throw std::invalid_argument("DetectorProfile: sigma must be positive");
        if (lambda0 < 0.0) throw std::invalid_argument("DetectorProfile: lambda0 must be >= 0");
        if (kappa_left && *kappa_left <= 0.0)
            throw std::invalid_argument("DetectorProfile: kappa_left must be positive");
        if (kappa_right && *kappa_right <= 0.0)
            throw std::invalid_argument("DetectorProfile: kappa_right must be positive");
    }
};

enum class BoundarySide { Left, Right, Bulk };

inline const char* to_string(BoundarySide s) {
    switch (s) {
        case BoundarySide::Left: return "left";
        case BoundarySide::Right: return "right";
        default: return "bulk";
    }
}

struct Detected {
    double time = 0.0;
    double position = 0.0;
    BoundarySide side = BoundarySide::Bulk;
};

struct NeverDetected {};

using DetectionOutcome = std::variant<Detected, NeverDetected>;

inline bool is_detected(const DetectionOutcome& z) {
    return std::holds_alternative<Detected>(z);
}

/// Time-binned, boundary-resolved detection probability masses plus the
/// scalar never-detected probability. The surviving norm at t_max is split
/// between p_never and truncation_remainder: if the detection flux at t_max
/// is still significant the run was truncated mid-absorption and the
/// leftover is reported as truncation, otherwise as never-detected.
struct DetectionDistribution {
    std::vector<double> bin_edges;  // n_bins + 1 edges, uniform over [0, t_max]
    std::vector<double> mass_left;
    std::vector<double> mass_right;
    double p_never = 0.0;
    double truncation_remainder = 0.0;

    std::size_t n_bins() const { return mass_left.size(); }
    double detected_mass() const {
        double s = 0.0;
        for (double m : mass_left) s += m;
        for (double m : mass_right) s += m;
        return s;
    }
    double surviving_norm() const { return p_never + truncation_remainder; }
    double bin_center(std::size_t k) const { return 0.5 * (bin_edges[k] + bin_edges[k + 1]); }
};

/// Mass-weighted mean of bin centers, conditional on detection.
double mean_detection_time(const DetectionDistribution& dist);

/// Total-variation distance between two distributions on matched time bins;
/// the surviving-norm mass counts as one extra cell.
double total_variation(const DetectionDistribution& a, const DetectionDistribution& b);

/// Kolmogorov-Smirnov statistic of the cumulative detected mass over time.
double ks_statistic(const DetectionDistribution& a, const DetectionDistribution& b);

}  // namespace abrlab

#endif
