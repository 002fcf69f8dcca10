#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "owagen/error.hpp"
#include "owagen/normal.hpp"

namespace owagen {

/// Standard deviation of U[0,1], the supremum of any truncated std on [0,1].
inline constexpr double kUniformStd = 0.28867513459481288225;

/// Below this normal mass on [0,1] the truncated distribution is not evaluated.
inline constexpr double kMinNormalMass = 1e-300;

/// Box for the parent (μ, σ) used by the calibration search.
struct ParentBounds {
    double mu_min = -5.0;
    double mu_max = 6.0;
    double sigma_min = 1e-6;
    double sigma_max = 1e3;
};

struct Moments {
    double mean = 0.0;
    double std = 0.0;
};

namespace detail {

enum class MomentStatus { ok, invalid_sigma, underflow, negative_radicand };

/// The standardized window [a, b] = [-μ/σ, (1-μ)/σ] of a parent normal.
///
/// When the window lies entirely in one tail, the normalizer Φ(b) - Φ(a)
/// and the densities φ(a), φ(b) are all carried multiplied by exp(c²/2),
/// c being the bound nearest the mode. The common factor cancels in every
/// ratio used below, and nothing underflows however far μ sits from [0,1].
struct Window {
    double a = 0.0;
    double b = 0.0;
    double anchor = 0.0;
    double scaled_mass = 0.0;

    /// exp(c²/2)·φ(z)
    double scaled_density(double z) const noexcept {
        return normal::kInvSqrt2Pi * std::exp(-0.5 * (std::abs(z) - anchor) * (std::abs(z) + anchor));
    }
};

inline MomentStatus make_window(double mu, double sigma, Window& w) noexcept {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
        return MomentStatus::invalid_sigma;
    }
    w.a = -mu / sigma;
    w.b = (1.0 - mu) / sigma;
    if (w.a >= 0.0) {
        w.anchor = w.a;
        w.scaled_mass = normal::scaled_upper_mass(w.a, w.b);
    } else if (w.b <= 0.0) {
        w.anchor = -w.b;
        w.scaled_mass = normal::scaled_upper_mass(-w.b, -w.a);
    } else {
        w.anchor = 0.0;
        w.scaled_mass = normal::mass(w.a, w.b);
    }
    if (!(w.scaled_mass > kMinNormalMass) || !std::isfinite(w.scaled_mass)) {
        return MomentStatus::underflow;
    }
    return MomentStatus::ok;
}

/// Above this parent std the closed form cancels away most of its digits.
inline constexpr double kWideSigma = 50.0;

/// Moments of a wide parent, taken in x-space.
///
/// On [0,1] the density is proportional to exp(θ₁x + θ₂x²) with θ₁ = μ/σ²
/// and θ₂ = -1/(2σ²). For σ > kWideSigma and moderate θ₁ this is an almost
/// polynomial integrand that a fixed 30-point Gauss-Legendre rule resolves
/// to rounding, without the O(σ²) cancellation of the standardized form.
inline Moments wide_parent_moments(double mu, double sigma) noexcept {
    using boost::math::quadrature::gauss;
    const double theta1 = mu / (sigma * sigma);
    const double theta2 = -0.5 / (sigma * sigma);
    auto kernel = [=](double x) { return std::exp(x * (theta1 + theta2 * x)); };
    const double mass = gauss<double, 30>::integrate(kernel, 0.0, 1.0);
    const double mean = gauss<double, 30>::integrate([&](double x) { return x * kernel(x); }, 0.0, 1.0) / mass;
    const double var =
        gauss<double, 30>::integrate([&](double x) { return (x - mean) * (x - mean) * kernel(x); }, 0.0, 1.0) / mass;
    return {std::clamp(mean, 0.0, 1.0), std::sqrt(std::max(var, 0.0))};
}

/// A window starting this far into one tail, with the other bound out of
/// reach, uses the one-sided continued fraction below.
inline constexpr double kTailAnchor = 3.0;

/// Moments of N(0,1) restricted to z > c, as offsets from c: (E[z] - c, Var[z]).
///
/// With u_k = k/(c + u_{k+1}) the inverse Mills ratio is c + u_1, so the
/// mean offset is u_1 and the variance 1 - (c + u_1)·u_1 reduces to
/// (u_2 - u_1)/(c + u_2). Neither form cancels, unlike the textbook
/// expression whose terms grow as c² while the variance shrinks as 1/c².
inline std::pair<double, double> upper_tail_offsets(double c) noexcept {
    double u1 = 0.0;
    double u2 = 0.0;
    for (int k = 80; k >= 1; --k) {
        u2 = u1;
        u1 = k / (c + u1);
    }
    return {u1, (u2 - u1) / (c + u2)};
}

/// Post-truncation mean and std on [0,1]. Never throws.
inline MomentStatus evaluate_moments(double mu, double sigma, Moments& out) noexcept {
    Window w;
    if (const MomentStatus s = make_window(mu, sigma, w); s != MomentStatus::ok) {
        return s;
    }
    if (sigma > kWideSigma && std::abs(mu) <= 20.0 * sigma * sigma) {
        out = wide_parent_moments(mu, sigma);
        return MomentStatus::ok;
    }
    const double far = w.a >= 0.0 ? w.b : -w.a;
    if (w.anchor >= kTailAnchor && 0.5 * (far - w.anchor) * (far + w.anchor) > 40.0) {
        const auto [offset, unit_var] = upper_tail_offsets(w.anchor);
        const double from_edge = sigma * offset;
        out.mean = std::clamp(w.a >= 0.0 ? from_edge : 1.0 - from_edge, 0.0, 1.0);
        out.std = sigma * std::sqrt(std::max(unit_var, 0.0));
        return MomentStatus::ok;
    }
    const double lambda_a = w.scaled_density(w.a) / w.scaled_mass;
    const double lambda_b = w.scaled_density(w.b) / w.scaled_mass;
    const double shift = lambda_a - lambda_b;
    const double mean = mu + sigma * shift;

    // a·φ(a) vanishes as |a| grows; keep 0·inf out of the sum.
    const double a_term = lambda_a == 0.0 ? 0.0 : w.a * lambda_a;
    const double b_term = lambda_b == 0.0 ? 0.0 : w.b * lambda_b;
    double var = sigma * sigma * (1.0 + a_term - b_term - shift * shift);
    if (var < 0.0) {
        if (var < -1e-12) {
            return MomentStatus::negative_radicand;
        }
        var = 0.0;
    }
    out.mean = std::clamp(mean, 0.0, 1.0);
    out.std = std::sqrt(var);
    return MomentStatus::ok;
}

inline void throw_for(MomentStatus status, double mu, double sigma) {
    const std::string where = " (mu=" + format_number(mu) + ", sigma=" + format_number(sigma) + ")";
    switch (status) {
    case MomentStatus::ok:
        return;
    case MomentStatus::invalid_sigma:
        throw DomainError("parent parameters must be finite with sigma > 0" + where);
    case MomentStatus::underflow:
        throw UnderflowError("parent normal has negligible mass on [0,1]" + where);
    case MomentStatus::negative_radicand:
        throw NumericalError("truncated variance is negative beyond rounding" + where);
    }
}

}  // namespace detail

inline Moments truncated_moments(double mu, double sigma) {
    Moments m;
    detail::throw_for(detail::evaluate_moments(mu, sigma, m), mu, sigma);
    return m;
}

/// Mean of N(μ, σ²) restricted to [0,1].
inline double truncated_mean(double mu, double sigma) { return truncated_moments(mu, sigma).mean; }

/// Standard deviation of N(μ, σ²) restricted to [0,1].
inline double truncated_std(double mu, double sigma) { return truncated_moments(mu, sigma).std; }

/// A parent normal together with the moments it has after truncation to [0,1].
struct TruncNormSpec {
    double mu = 0.5;
    double sigma = 1.0;
    double mu_w = 0.5;
    double sigma_w = 0.0;

    static TruncNormSpec from_parent(double mu, double sigma) {
        const Moments m = truncated_moments(mu, sigma);
        return {mu, sigma, m.mean, m.std};
    }
};

/// Density of the truncated normal; zero outside [0,1].
inline double pdf(const TruncNormSpec& spec, double x) {
    detail::Window w;
    detail::throw_for(detail::make_window(spec.mu, spec.sigma, w), spec.mu, spec.sigma);
    if (x < 0.0 || x > 1.0) {
        return 0.0;
    }
    return w.scaled_density((x - spec.mu) / spec.sigma) / (spec.sigma * w.scaled_mass);
}

/// Mean and std of the truncated normal by adaptive Gauss-Kronrod quadrature.
///
/// Integrates the unnormalized Gaussian kernel directly, so it shares no
/// code path with the closed forms above. Meant for tests and validation.
inline Moments oracle_moments(double mu, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
        throw DomainError("parent parameters must be finite with sigma > 0");
    }
    if (mu > 0.5) {
        // Mirror so that the peak sits near 0, where the abscissae are finely spaced.
        const Moments m = oracle_moments(1.0 - mu, sigma);
        return {1.0 - m.mean, m.std};
    }
    using boost::math::quadrature::gauss_kronrod;

    // Scale the kernel so its maximum over [0,1] is 1 (avoids underflow for μ outside).
    const double nearest = std::clamp(mu, 0.0, 1.0);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    auto kernel = [=](double x) { return std::exp(-(x - nearest) * (x + nearest - 2.0 * mu) * inv2s2); };

    // Break points around the peak keep narrow kernels resolved.
    // The kernel's decay length near its peak is σ, or σ²/|μ - peak| when μ is outside [0,1].
    const double gap = std::abs(mu - nearest);
    const double scale = gap > sigma ? sigma * sigma / gap : sigma;
    std::vector<double> cuts{0.0, 1.0};
    for (double k : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
        for (double c : {nearest - k * scale, nearest + k * scale}) {
            if (c > 0.0 && c < 1.0) {
                cuts.push_back(c);
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());

    constexpr unsigned max_depth = 15;
    constexpr double tol = 1e-10;
    auto integrate = [&](auto&& f) {
        double total = 0.0;
        double total_err = 0.0;
        double total_l1 = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            // Each segment is mapped onto [0,1]: the reported error of very short
            // intervals is not scaled by their width, which stalls the recursion.
            const double lo = cuts[i];
            const double width = cuts[i + 1] - cuts[i];
            auto unit = [&](double t) { return width * f(lo + width * t); };
            double err = 0.0;
            double l1 = 0.0;
            total += gauss_kronrod<double, 61>::integrate(unit, 0.0, 1.0, max_depth, tol, &err, &l1);
            total_err += err;
            total_l1 += l1;
        }
        if (!(total_err <= tol * total_l1)) {
            throw NumericalError("oracle quadrature did not converge (mu=" + detail::format_number(mu) +
                                 ", sigma=" + detail::format_number(sigma) + ")");
        }
        return total;
    };

    const double mass = integrate(kernel);
    if (!(mass > 0.0)) {
        throw UnderflowError("oracle quadrature found no mass on [0,1]");
    }
    const double mean = integrate([&](double x) { return x * kernel(x); }) / mass;
    const double var = integrate([&](double x) { return (x - mean) * (x - mean) * kernel(x); }) / mass;
    return {mean, std::sqrt(std::max(var, 0.0))};
}

}  // namespace owagen
