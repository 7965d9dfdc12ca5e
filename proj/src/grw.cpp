#include "abrlab/grw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abrlab {

double uniform01(Rng& rng) {
    // 53 significant bits; never returns 0 or 1 exactly.
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

namespace {

double exponential_draw(Rng& rng, double rate) {
    return -std::log(uniform01(rng)) / rate;
}

DetectorProfile grw_profile(const GrwConfig& config, const std::vector<double>& lambda) {
    DetectorProfile p;
    p.V = config.V;
    p.lambda = lambda;
    p.sigma = config.sigma;
    return p;
}

// Advance psi in full dt steps plus one remainder step until t reaches target.
void advance_to(WaveFunction& psi, double& t, double target, const TridiagonalOperator& op,
                const GrwConfig& config) {
    constexpr double kTimeEps = 1e-12;
    while (target - t > kTimeEps) {
        const double h = std::min(config.dt, target - t);
        psi = step(psi, op, h, config.consts);
        t += h;
    }
    t = target;
}

}  // namespace

std::vector<double> collapse_rate_density(const WaveFunction& psi, const RateOperatorKind& kind,
                                          double sigma) {
    std::vector<double> density(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) density[i] = std::norm(psi.values[i]);
    density = gaussian_convolve(psi.grid, density, sigma);
    if (const auto* c = std::get_if<ConstantRate>(&kind)) {
        for (double& d : density) d *= c->lambda0;
    } else {
        const auto& lam = std::get<PositionDependentRate>(kind).lambda;
        if (lam.size() != density.size())
            throw std::invalid_argument("collapse_rate_density: lambda size mismatch");
        for (std::size_t i = 0; i < density.size(); ++i) density[i] *= lam[i];
    }
    return density;
}

double integrate(const SpatialGrid& grid, const std::vector<double>& density) {
    double acc = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i)
        acc += trapezoid_weight(i, density.size()) * density[i];
    return acc * grid.dx();
}

double sample_from_density(const SpatialGrid& grid, const std::vector<double>& density, Rng& rng) {
    const std::size_t n = density.size();
    std::vector<double> cdf(n, 0.0);
    const double dx = grid.dx();
    for (std::size_t i = 1; i < n; ++i)
        cdf[i] = cdf[i - 1] + 0.5 * dx * (density[i - 1] + density[i]);
    const double total = cdf[n - 1];
    if (total <= 0.0) throw std::runtime_error("sample_from_density: total rate is zero");
    const double target = uniform01(rng) * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    const std::size_t hi = std::min<std::size_t>(n - 1, static_cast<std::size_t>(it - cdf.begin()));
    const std::size_t lo = hi - 1;
    const double cell = cdf[hi] - cdf[lo];
    const double frac = cell > 0.0 ? (target - cdf[lo]) / cell : 0.5;
    return grid.node(lo) + frac * dx;
}

double sample_collapse_center(const WaveFunction& psi, const RateOperatorKind& kind, double sigma,
                              Rng& rng) {
    return sample_from_density(psi.grid, collapse_rate_density(psi, kind, sigma), rng);
}

WaveFunction apply_collapse(const WaveFunction& psi, double center, double sigma,
                            JumpConvention jump) {
    const double denom = jump == JumpConvention::GaussianSqrt ? 4.0 * sigma * sigma
                                                              : 2.0 * sigma * sigma;
    WaveFunction out = psi;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double d = out.grid.node(i) - center;
        out.values[i] *= std::exp(-d * d / denom);
    }
    const double n2 = squared_norm(out);
    if (n2 <= 0.0 || !std::isfinite(n2))
        throw std::runtime_error("apply_collapse: zero post-collapse norm");
    const double s = 1.0 / std::sqrt(n2);
    for (Complex& z : out.values) z *= s;
    return out;
}

GrwRunRecord run_grw(const WaveFunction& psi0, const RateOperatorKind& kind,
                     const GrwConfig& config, std::uint64_t seed) {
    if (config.dt <= 0.0 || config.t_max < config.dt)
        throw std::invalid_argument("run_grw: invalid dt / t_max");
    Rng rng(seed);
    GrwRunRecord rec;
    rec.seed = seed;

    if (const auto* c = std::get_if<ConstantRate>(&kind)) {
        const TridiagonalOperator op = assemble(psi0.grid, grw_profile(config, {}),
                                                config.bc_left, config.bc_right, config.consts);
        WaveFunction psi = psi0;
        double t = 0.0;
        double next_t = c->lambda0 > 0.0 ? exponential_draw(rng, c->lambda0)
                                         : std::numeric_limits<double>::infinity();
        while (next_t < config.t_max) {
            advance_to(psi, t, next_t, op, config);
            const double pre_norm = squared_norm(psi);
            const double center = sample_collapse_center(psi, kind, config.sigma, rng);
            psi = apply_collapse(psi, center, config.sigma, config.jump);
            rec.events.push_back({t, center, pre_norm});
            next_t = t + exponential_draw(rng, c->lambda0);
        }
        advance_to(psi, t, config.t_max, op, config);
        rec.final_state = std::move(psi);
        return rec;
    }

    const auto& pd = std::get<PositionDependentRate>(kind);
    const TridiagonalOperator op = assemble(psi0.grid, grw_profile(config, pd.lambda),
                                            config.bc_left, config.bc_right, config.consts);
    WaveFunction psi = psi0;
    double t = 0.0;
    double threshold = uniform01(rng);  // collapse when survival ||psi||^2 first drops below
    while (t < config.t_max - 1e-12) {
        const double h = std::min(config.dt, config.t_max - t);
        const double t_prev = t;
        const double s_prev = squared_norm(psi);
        psi = step(psi, op, h, config.consts);
        const double s_now = squared_norm(psi);
        t += h;
        if (s_now < threshold) {
            // log-linear interpolation of the crossing time within the step
            const double frac =
                (std::log(s_prev) - std::log(threshold)) / (std::log(s_prev) - std::log(s_now));
            const double t_jump = t_prev + frac * h;
            const double center = sample_collapse_center(psi, kind, config.sigma, rng);
            psi = apply_collapse(psi, center, config.sigma, config.jump);
            rec.events.push_back({t_jump, center, s_now});
            threshold = uniform01(rng);
        }
    }
    rec.final_state = std::move(psi);
    return rec;
}

DetectionOutcome first_detection(const WaveFunction& psi0, const PositionDependentRate& kind,
                                 const GrwConfig& config, std::uint64_t seed) {
    if (config.dt <= 0.0 || config.t_max < config.dt)
        throw std::invalid_argument("first_detection: invalid dt / t_max");
    Rng rng(seed);
    const TridiagonalOperator op = assemble(psi0.grid, grw_profile(config, kind.lambda),
                                            config.bc_left, config.bc_right, config.consts);
    const double threshold = uniform01(rng);
    WaveFunction psi = psi0;
    double t = 0.0;
    while (t < config.t_max - 1e-12) {
        const double h = std::min(config.dt, config.t_max - t);
        const double t_prev = t;
        const double s_prev = squared_norm(psi);
        psi = step(psi, op, h, config.consts);
        const double s_now = squared_norm(psi);
        t += h;
        if (s_now < threshold) {
            const double frac =
                (std::log(s_prev) - std::log(threshold)) / (std::log(s_prev) - std::log(s_now));
            const double t_jump = t_prev + frac * h;
            const double center =
                sample_collapse_center(psi, RateOperatorKind{kind}, config.sigma, rng);
            return Detected{t_jump, center, BoundarySide::Bulk};
        }
    }
    return NeverDetected{};
}

std::vector<DetectionOutcome> first_detection_ensemble(const WaveFunction& psi0,
                                                       const PositionDependentRate& kind,
                                                       const GrwConfig& config, std::size_t n_runs,
                                                       std::uint64_t base_seed) {
    if (config.dt <= 0.0 || config.t_max < config.dt)
        throw std::invalid_argument("first_detection_ensemble: invalid dt / t_max");
    const TridiagonalOperator op = assemble(psi0.grid, grw_profile(config, kind.lambda),
                                            config.bc_left, config.bc_right, config.consts);

    // Pass 1: the pre-first-jump evolution is deterministic; record the
    // survival curve once.
    std::vector<double> step_start_time;
    std::vector<double> step_h;
    std::vector<double> survival;  // squared norm after each step
    survival.push_back(squared_norm(psi0));
    step_start_time.push_back(0.0);
    step_h.push_back(0.0);  // index 0 unused; survival[k] pairs with step k >= 1
    {
        WaveFunction psi = psi0;
        double t = 0.0;
        while (t < config.t_max - 1e-12) {
            const double h = std::min(config.dt, config.t_max - t);
            step_start_time.push_back(t);
            step_h.push_back(h);
            psi = step(psi, op, h, config.consts);
            t += h;
            survival.push_back(squared_norm(psi));
        }
    }
    const std::size_t n_steps = survival.size() - 1;

    struct Pending {
        std::size_t run;
        double time;
        double center_u;  // uniform draw reserved for the center inversion
    };
    std::vector<DetectionOutcome> outcomes(n_runs, NeverDetected{});
    std::vector<std::vector<Pending>> by_step(n_steps + 1);
    for (std::size_t i = 0; i < n_runs; ++i) {
        Rng rng(base_seed + i);
        const double threshold = uniform01(rng);
        // first step index k >= 1 with survival[k] < threshold (survival is non-increasing)
        const auto it = std::partition_point(survival.begin() + 1, survival.end(),
                                             [&](double s) { return s >= threshold; });
        if (it == survival.end()) continue;
        const auto k = static_cast<std::size_t>(it - survival.begin());
        const double s_prev = survival[k - 1];
        const double s_now = survival[k];
        const double frac =
            (std::log(s_prev) - std::log(threshold)) / (std::log(s_prev) - std::log(s_now));
        by_step[k].push_back({i, step_start_time[k] + frac * step_h[k], uniform01(rng)});
    }

    // Pass 2: re-run the deterministic sweep, inverting the center CDF once
    // per step that has pending outcomes.
    WaveFunction psi = psi0;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        psi = step(psi, op, step_h[k], config.consts);
        if (by_step[k].empty()) continue;
        const std::vector<double> density =
            collapse_rate_density(psi, RateOperatorKind{kind}, config.sigma);
        const std::size_t n = density.size();
        std::vector<double> cdf(n, 0.0);
        const double dx = psi.grid.dx();
        for (std::size_t i = 1; i < n; ++i)
            cdf[i] = cdf[i - 1] + 0.5 * dx * (density[i - 1] + density[i]);
        const double total = cdf[n - 1];
        for (const Pending& p : by_step[k]) {
            if (total <= 0.0)
                throw std::runtime_error("first_detection_ensemble: zero rate at crossing");
            const double target = p.center_u * total;
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
            const std::size_t hi =
                std::min<std::size_t>(n - 1, static_cast<std::size_t>(it - cdf.begin()));
            const std::size_t lo = hi - 1;
            const double cell = cdf[hi] - cdf[lo];
            const double frac = cell > 0.0 ? (target - cdf[lo]) / cell : 0.5;
            outcomes[p.run] = Detected{p.time, psi.grid.node(lo) + frac * dx, BoundarySide::Bulk};
        }
    }
    return outcomes;
}

}  // namespace abrlab
