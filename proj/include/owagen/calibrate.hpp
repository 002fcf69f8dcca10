#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "owagen/error.hpp"
#include "owagen/nelder_mead.hpp"
#include "owagen/truncnorm.hpp"

namespace owagen {

/// Default acceptance threshold on the moment-space distance.
inline constexpr double kDefaultEpsilon = 1e-8;

/// Requested risk α and trade-off δ, both in [0,1].
struct DecisionPoint {
    double alpha = 0.5;
    double delta = 0.5;

    friend bool operator==(const DecisionPoint&, const DecisionPoint&) = default;
};

inline void validate(const DecisionPoint& p) {
    auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    if (!in_unit(p.alpha) || !in_unit(p.delta)) {
        throw DomainError("alpha and delta must lie in [0,1] (got alpha=" + detail::format_number(p.alpha) +
                          ", delta=" + detail::format_number(p.delta) + ")");
    }
}

/// Largest trade-off on the parabolic frontier for a given risk, 4α(1-α).
inline double delta_max(double alpha) noexcept { return 4.0 * alpha * (1.0 - alpha); }

/// Target truncated moments: μ_w = α and σ_w = δ/(2√3).
inline Moments target_moments(const DecisionPoint& p) {
    validate(p);
    return {p.alpha, p.delta * kUniformStd};
}

/// Euclidean distance between two (mean, std) pairs.
inline double distance(const Moments& target, const Moments& candidate) noexcept {
    return std::hypot(target.mean - candidate.mean, target.std - candidate.std);
}

/// Fast feasibility pre-check δ ≤ 4α(1-α) + slack. Not authoritative.
inline bool is_feasible_parabola(const DecisionPoint& p, double slack = 0.02) {
    validate(p);
    if (!(slack >= 0.0)) {
        throw DomainError("slack must be nonnegative");
    }
    return p.delta <= delta_max(p.alpha) + slack;
}

struct CalibrationConfig {
    double epsilon = kDefaultEpsilon;
    SimplexConfig simplex{};
    ParentBounds bounds{};
    /// Initial simplex displacement along (μ, log σ).
    Point<2> step{0.05, 0.5};
    /// Retry once from (0.5, 0.15) when the first run stalls below the parabola.
    bool restart = true;
};

struct CalibrationResult {
    TruncNormSpec spec;
    double distance = std::numeric_limits<double>::infinity();
    bool accepted = false;
    std::size_t iterations = 0;
    std::size_t function_evals = 0;
    bool restarted = false;
};

namespace detail {

/// Objective over (μ, log σ), evaluated at the projection onto the parent box.
class MomentMismatch {
public:
    MomentMismatch(Moments target, const ParentBounds& bounds) : target_(target), bounds_(bounds) {}

    std::pair<double, double> parent(const Point<2>& x) const noexcept {
        return {std::clamp(x[0], bounds_.mu_min, bounds_.mu_max),
                std::clamp(std::exp(x[1]), bounds_.sigma_min, bounds_.sigma_max)};
    }

    double operator()(const Point<2>& x) const noexcept {
        const auto [mu, sigma] = parent(x);
        Moments m;
        if (evaluate_moments(mu, sigma, m) != MomentStatus::ok) {
            return std::numeric_limits<double>::infinity();
        }
        return distance(target_, m);
    }

private:
    Moments target_;
    ParentBounds bounds_;
};

}  // namespace detail

/// Finds the parent (μ, σ) whose truncation to [0,1] has the moments
/// requested by `p`, and accepts it when the residual distance is below ε.
///
/// A rejected point still carries the best spec found, for diagnostics.
/// δ = 0 is handled by the Dirac path in generate_weights, not here.
inline CalibrationResult calibrate(const DecisionPoint& p, const CalibrationConfig& config) {
    const Moments target = target_moments(p);
    if (!(config.epsilon > 0.0)) {
        throw DomainError("epsilon must be positive");
    }
    const detail::MomentMismatch objective(target, config.bounds);

    auto run = [&](double mu0, double sigma0) {
        const Point<2> start{mu0, std::log(std::max(sigma0, config.bounds.sigma_min))};
        return nelder_mead<2>(objective, start, config.step, config.simplex);
    };

    CalibrationResult result;
    auto absorb = [&](const SimplexResult<2>& run_result) {
        result.iterations += run_result.iterations;
        result.function_evals += run_result.evaluations;
        const auto [mu, sigma] = objective.parent(run_result.argmin);
        Moments m;
        if (detail::evaluate_moments(mu, sigma, m) != detail::MomentStatus::ok) {
            return;
        }
        const double d = distance(target, m);
        if (d < result.distance) {
            result.spec = {mu, sigma, m.mean, m.std};
            result.distance = d;
        }
    };

    absorb(run(p.alpha, std::max(target.std, 1e-4)));
    if (config.restart && !(result.distance < config.epsilon) && is_feasible_parabola(p, 0.0)) {
        result.restarted = true;
        absorb(run(0.5, 0.15));
    }
    result.accepted = result.distance < config.epsilon;
    return result;
}

inline CalibrationResult calibrate(const DecisionPoint& p, double epsilon = kDefaultEpsilon) {
    CalibrationConfig config;
    config.epsilon = epsilon;
    return calibrate(p, config);
}

}  // namespace owagen
