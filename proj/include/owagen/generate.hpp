#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "owagen/calibrate.hpp"
#include "owagen/error.hpp"
#include "owagen/metrics.hpp"
#include "owagen/truncnorm.hpp"

namespace owagen {

/// Sum of grid densities below which discretize gives up on the PDF.
inline constexpr double kMinGridMass = 1e-300;

/// Position of order weight i (0-based) on the unit interval, i/(n-1).
inline double grid_position(std::size_t i, std::size_t n) {
    return static_cast<double>(i) / static_cast<double>(n - 1);
}

/// All mass on the order position nearest to α; exact ties go to the lower index.
inline WeightVector dirac_weights(double alpha, std::size_t n) {
    if (n < 2) {
        throw DimensionError("dirac_weights needs n >= 2");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in [0,1]");
    }
    // Compare in index units so that i/(n-1) is never rounded.
    const double target = alpha * static_cast<double>(n - 1);
    std::size_t best = 0;
    double best_gap = std::abs(target);
    for (std::size_t i = 1; i < n; ++i) {
        const double gap = std::abs(target - static_cast<double>(i));
        if (gap < best_gap) {
            best = i;
            best_gap = gap;
        }
    }
    return WeightVector::one_hot(n, best);
}

namespace detail {

/// Normalized grid densities, or nothing when they all underflow.
inline std::optional<WeightVector> try_discretize(const TruncNormSpec& spec, std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = pdf(spec, grid_position(i, n));
        total += w[i];
    }
    if (!(total > kMinGridMass) || !std::isfinite(total)) {
        return std::nullopt;
    }
    for (double& wi : w) {
        wi /= total;
    }
    return WeightVector(std::move(w));
}

}  // namespace detail

/// Samples the truncated density at i/(n-1), i = 0..n-1, and normalizes.
///
/// If every sample underflows (a very narrow density between grid points),
/// the result degenerates to dirac_weights(μ_w, n), the limit of the same
/// construction as σ shrinks.
inline WeightVector discretize(const TruncNormSpec& spec, std::size_t n) {
    if (n < 2) {
        throw DimensionError("discretize needs n >= 2");
    }
    if (auto w = detail::try_discretize(spec, n)) {
        return *std::move(w);
    }
    return dirac_weights(std::clamp(spec.mu_w, 0.0, 1.0), n);
}

/// How a weight vector was produced.
enum class GenerationPath {
    calibrated,      ///< truncated normal fitted and discretized
    dirac,           ///< δ = 0, all mass on one position
    dirac_fallback,  ///< fitted, but the density underflowed on the grid
    single,          ///< n = 1, the trivial vector (1)
};

struct GenerationOutcome {
    DecisionPoint requested;
    WeightVector weights{std::vector<double>{1.0}};
    GenerationPath path = GenerationPath::single;
    /// Present unless the Dirac or single-criterion path skipped calibration.
    std::optional<CalibrationResult> calibration;
    /// Metrics of `weights`; undefined (empty) when n = 1.
    std::optional<double> achieved_orness;
    std::optional<double> achieved_dispersion;
    std::optional<double> achieved_tradeoff;

    bool degenerate() const noexcept { return path == GenerationPath::single; }
};

inline GenerationOutcome make_outcome(const DecisionPoint& p, WeightVector weights, GenerationPath path,
                                      std::optional<CalibrationResult> calibration = std::nullopt) {
    GenerationOutcome out{p, std::move(weights), path, std::move(calibration), {}, {}, {}};
    if (out.weights.size() >= 2) {
        out.achieved_orness = orness(out.weights);
        out.achieved_dispersion = dispersion(out.weights);
        out.achieved_tradeoff = tradeoff(out.weights);
    }
    return out;
}

/// Decision point → calibrated truncated normal → n order weights.
///
/// Throws InfeasibleError when no truncated normal reproduces (α, δ) to
/// within the configured ε. The achieved metrics generally differ from the
/// requested (α, δ) at small n; callers should read them from the outcome.
inline GenerationOutcome generate_weights(const DecisionPoint& p, std::size_t n, const CalibrationConfig& config) {
    validate(p);
    if (n == 0) {
        throw DimensionError("n must be at least 1");
    }
    if (n == 1) {
        return make_outcome(p, WeightVector(std::vector<double>{1.0}), GenerationPath::single);
    }
    if (p.delta == 0.0) {
        return make_outcome(p, dirac_weights(p.alpha, n), GenerationPath::dirac);
    }
    CalibrationResult calibration = calibrate(p, config);
    if (!calibration.accepted) {
        throw InfeasibleError(p.alpha, p.delta, calibration.distance, delta_max(p.alpha));
    }
    if (auto weights = detail::try_discretize(calibration.spec, n)) {
        return make_outcome(p, *std::move(weights), GenerationPath::calibrated, std::move(calibration));
    }
    WeightVector weights = dirac_weights(std::clamp(calibration.spec.mu_w, 0.0, 1.0), n);
    return make_outcome(p, std::move(weights), GenerationPath::dirac_fallback, std::move(calibration));
}

inline GenerationOutcome generate_weights(const DecisionPoint& p, std::size_t n,
                                          double epsilon = kDefaultEpsilon) {
    CalibrationConfig config;
    config.epsilon = epsilon;
    return generate_weights(p, n, config);
}

}  // namespace owagen
