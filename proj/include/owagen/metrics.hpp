#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "owagen/error.hpp"

namespace owagen {

/// Absolute tolerance on Σ wᵢ = 1 accepted by WeightVector.
inline constexpr double kWeightSumTolerance = 1e-9;

/// Ordered weights w₁..wₙ: nonnegative, summing to one.
///
/// w₁ attaches to the smallest criterion value, wₙ to the largest.
/// Construction validates and never renormalizes.
class WeightVector {
public:
    explicit WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
        if (weights_.empty()) {
            throw DimensionError("weight vector must have at least one entry");
        }
        double sum = 0.0;
        for (double w : weights_) {
            if (!std::isfinite(w) || w < 0.0) {
                throw DomainError("weights must be finite and nonnegative");
            }
            sum += w;
        }
        if (std::abs(sum - 1.0) > kWeightSumTolerance) {
            throw DomainError("weights must sum to 1 (got " + detail::format_number(sum) + ")");
        }
    }

    /// The vector with all mass on the i-th (0-based) position.
    static WeightVector one_hot(std::size_t n, std::size_t index) {
        std::vector<double> w(n, 0.0);
        w.at(index) = 1.0;
        return WeightVector(std::move(w));
    }

    static WeightVector uniform(std::size_t n) {
        return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    }

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::span<const double> values() const noexcept { return weights_; }
    const std::vector<double>& to_vector() const noexcept { return weights_; }

    WeightVector reversed() const {
        return WeightVector(std::vector<double>(weights_.rbegin(), weights_.rend()));
    }

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    std::vector<double> weights_;
};

/// Criteria values x₁..xₙ to be aggregated; all finite.
class CriteriaSet {
public:
    explicit CriteriaSet(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) {
            throw DimensionError("criteria set must have at least one entry");
        }
        for (double x : values_) {
            if (!std::isfinite(x)) {
                throw DomainError("criteria values must be finite");
            }
        }
    }

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }

    /// Ascending copy, x₍₁₎ ≤ ... ≤ x₍ₙ₎.
    std::vector<double> sorted() const {
        std::vector<double> s = values_;
        std::stable_sort(s.begin(), s.end());
        return s;
    }

private:
    std::vector<double> values_;
};

/// OWA aggregation Σ wᵢ·x₍ᵢ₎ with x₍ᵢ₎ the i-th smallest value.
///
/// The result is clamped into [min(x), max(x)] so that rounding in Σ wᵢ
/// never pushes it outside the range of the inputs.
inline double owa_aggregate(const WeightVector& w, const CriteriaSet& x) {
    if (w.size() != x.size()) {
        throw DimensionError("weight vector has " + std::to_string(w.size()) + " entries but " +
                             std::to_string(x.size()) + " criteria were given");
    }
    const std::vector<double> sorted = x.sorted();
    double value = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        value += w[i] * sorted[i];
    }
    return std::clamp(value, sorted.front(), sorted.back());
}

namespace detail {

inline void require_two_or_more(const WeightVector& w, const char* metric) {
    if (w.size() < 2) {
        throw DimensionError(std::string(metric) + " is undefined for a single weight");
    }
}

}  // namespace detail

/// (1/(n-1)) Σ wᵢ(n-i); 1 for the minimum operator, 0 for the maximum.
inline double andness(const WeightVector& w) {
    detail::require_two_or_more(w, "andness");
    const std::size_t n = w.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += w[i] * static_cast<double>(n - 1 - i);
    }
    return sum / static_cast<double>(n - 1);
}

inline double orness(const WeightVector& w) {
    detail::require_two_or_more(w, "orness");
    return 1.0 - andness(w);
}

/// Normalized Shannon entropy of the weights, with 0·log 0 = 0.
inline double dispersion(const WeightVector& w) {
    detail::require_two_or_more(w, "dispersion");
    double entropy = 0.0;
    for (double wi : w.values()) {
        if (wi > 0.0) {
            entropy -= wi * std::log(wi);
        }
    }
    return entropy / std::log(static_cast<double>(w.size()));
}

/// One minus the normalized Euclidean distance to the uniform vector.
inline double tradeoff(const WeightVector& w) {
    detail::require_two_or_more(w, "tradeoff");
    const auto n = static_cast<double>(w.size());
    double sq = 0.0;
    for (double wi : w.values()) {
        const double diff = wi - 1.0 / n;
        sq += diff * diff;
    }
    return 1.0 - std::sqrt(n * sq / (n - 1.0));
}

}  // namespace owagen
