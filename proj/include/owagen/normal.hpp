#pragma once

#include <cmath>

namespace owagen::normal {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kInvSqrtPi = 0.56418958354775628695;

/// Standard normal density φ(z).
inline double pdf(double z) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

/// Standard normal CDF Φ(z) through erfc, accurate in both tails.
inline double cdf(double z) noexcept { return 0.5 * std::erfc(-z * kInvSqrt2); }

/// Scaled complementary error function exp(x²)·erfc(x) for x ≥ 0.
///
/// Below 10 the product is formed directly (erfc keeps relative precision
/// there); above, the Laplace continued fraction is evaluated bottom-up.
inline double erfcx(double x) noexcept {
    if (x < 10.0) {
        return std::exp(x * x) * std::erfc(x);
    }
    // √π·erfcx(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    double tail = 0.0;
    for (int k = 60; k >= 1; --k) {
        tail = (0.5 * k) / (x + tail);
    }
    return kInvSqrtPi / (x + tail);
}

/// Φ(b) - Φ(a) for a ≤ b.
///
/// When both bounds sit in the same tail the difference is taken between
/// upper-tail probabilities, which keeps full relative precision instead of
/// cancelling two numbers close to 1. Underflows to 0 far in the tails; use
/// scaled_upper_mass there.
inline double mass(double a, double b) noexcept {
    if (a >= 0.0) {
        return 0.5 * (std::erfc(a * kInvSqrt2) - std::erfc(b * kInvSqrt2));
    }
    if (b <= 0.0) {
        return 0.5 * (std::erfc(-b * kInvSqrt2) - std::erfc(-a * kInvSqrt2));
    }
    return 0.5 * (std::erf(b * kInvSqrt2) - std::erf(a * kInvSqrt2));
}

/// exp(a²/2)·(Φ(b) - Φ(a)) for 0 ≤ a ≤ b, finite however deep the tail.
inline double scaled_upper_mass(double a, double b) noexcept {
    const double decay = std::exp(-0.5 * (b - a) * (b + a));
    return 0.5 * (erfcx(a * kInvSqrt2) - decay * erfcx(b * kInvSqrt2));
}

}  // namespace owagen::normal
