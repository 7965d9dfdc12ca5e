#include "abrlab/detector.hpp"

#include <algorithm>
#include <cmath>

namespace abrlab {

double mean_detection_time(const DetectionDistribution& dist) {
    const double detected = dist.detected_mass();
    if (detected <= 0.0)
        throw std::runtime_error("mean_detection_time: no detected mass");
    double acc = 0.0;
    for (std::size_t k = 0; k < dist.n_bins(); ++k)
        acc += (dist.mass_left[k] + dist.mass_right[k]) * dist.bin_center(k);
    return acc / detected;
}

double total_variation(const DetectionDistribution& a, const DetectionDistribution& b) {
    if (a.n_bins() != b.n_bins())
        throw std::invalid_argument("total_variation: bin counts differ");
    double s = 0.0;
    for (std::size_t k = 0; k < a.n_bins(); ++k) {
        s += std::abs(a.mass_left[k] - b.mass_left[k]);
        s += std::abs(a.mass_right[k] - b.mass_right[k]);
    }
    s += std::abs(a.surviving_norm() - b.surviving_norm());
    return 0.5 * s;
}

double ks_statistic(const DetectionDistribution& a, const DetectionDistribution& b) {
    if (a.n_bins() != b.n_bins())
        throw std::invalid_argument("ks_statistic: bin counts differ");
    double ca = 0.0, cb = 0.0, sup = 0.0;
    for (std::size_t k = 0; k < a.n_bins(); ++k) {
        ca += a.mass_left[k] + a.mass_right[k];
        cb += b.mass_left[k] + b.mass_right[k];
        sup = std::max(sup, std::abs(ca - cb));
    }
    return sup;
}

}  // namespace abrlab
