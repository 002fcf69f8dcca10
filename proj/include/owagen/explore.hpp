#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "owagen/calibrate.hpp"
#include "owagen/error.hpp"
#include "owagen/generate.hpp"
#include "owagen/metrics.hpp"
#include "owagen/parallel.hpp"

namespace owagen {

// ---------------------------------------------------------------------------
// Sampling and sweeps

/// Latin hypercube sample of the unit square of (α, δ).
///
/// Each of the n equal-width bins of [0,1] holds exactly one α and one δ.
/// Fully determined by `seed`.
inline std::vector<DecisionPoint> latin_hypercube(std::size_t n_samples, std::uint64_t seed) {
    if (n_samples == 0) {
        throw DomainError("latin_hypercube needs at least one sample");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    const auto n = static_cast<double>(n_samples);

    auto stratified = [&] {
        std::vector<std::size_t> bins(n_samples);
        std::iota(bins.begin(), bins.end(), std::size_t{0});
        std::shuffle(bins.begin(), bins.end(), rng);
        std::vector<double> coords(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) {
            // min() keeps the top bin closed at 1 if the jitter rounds up.
            coords[i] = std::min((static_cast<double>(bins[i]) + jitter(rng)) / n, 1.0);
        }
        return coords;
    };
    const std::vector<double> alphas = stratified();
    const std::vector<double> deltas = stratified();

    std::vector<DecisionPoint> points(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        points[i] = {alphas[i], deltas[i]};
    }
    return points;
}

/// One sampled decision point with its calibration outcome.
struct SweepRecord {
    DecisionPoint point;
    double distance = 0.0;
    bool accepted = false;
};

/// Calibrates every sample; record i corresponds to samples[i].
inline std::vector<SweepRecord> run_sweep(std::span<const DecisionPoint> samples,
                                          const CalibrationConfig& config = {},
                                          std::size_t threads = thread_count()) {
    std::vector<SweepRecord> records(samples.size());
    parallel_for(
        samples.size(),
        [&](std::size_t i) {
            const CalibrationResult r = calibrate(samples[i], config);
            records[i] = {samples[i], r.distance, r.accepted};
        },
        threads);
    return records;
}

/// `count` values spaced evenly in log10 between lo and hi inclusive.
inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0 && hi > lo) || count < 2) {
        throw DomainError("log_spaced needs 0 < lo < hi and count >= 2");
    }
    std::vector<double> out(count);
    const double l0 = std::log10(lo);
    const double step = (std::log10(hi) - l0) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = std::pow(10.0, l0 + step * static_cast<double>(i));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

/// The 30 log-spaced thresholds in [1e-12, 1e-1] used for the ε curve.
inline std::vector<double> default_epsilon_grid() { return log_spaced(1e-12, 1e-1, 30); }

struct EpsilonCurvePoint {
    double epsilon = 0.0;
    double rejected_fraction = 0.0;
};

/// Fraction of records with d ≥ ε, for each ε.
inline std::vector<EpsilonCurvePoint> epsilon_sweep(std::span<const SweepRecord> records,
                                                    std::span<const double> epsilons) {
    if (records.empty()) {
        throw InsufficientDataError("epsilon_sweep needs at least one record");
    }
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0) || (i > 0 && !(epsilons[i] >= epsilons[i - 1]))) {
            throw DomainError("epsilons must be positive and sorted ascending");
        }
    }
    std::vector<double> distances(records.size());
    std::transform(records.begin(), records.end(), distances.begin(),
                   [](const SweepRecord& r) { return r.distance; });
    std::sort(distances.begin(), distances.end());

    const auto total = static_cast<double>(distances.size());
    std::vector<EpsilonCurvePoint> curve;
    curve.reserve(epsilons.size());
    for (double eps : epsilons) {
        const auto below = std::lower_bound(distances.begin(), distances.end(), eps) - distances.begin();
        curve.push_back({eps, static_cast<double>(distances.size() - static_cast<std::size_t>(below)) / total});
    }
    return curve;
}

/// Calibrates each sample once, then evaluates the rejected fraction for every ε.
inline std::vector<EpsilonCurvePoint> epsilon_sweep(std::span<const DecisionPoint> samples,
                                                    std::span<const double> epsilons,
                                                    const CalibrationConfig& config = {}) {
    const std::vector<SweepRecord> records = run_sweep(samples, config);
    return epsilon_sweep(std::span<const SweepRecord>(records), epsilons);
}

// ---------------------------------------------------------------------------
// Frontier

/// Least-squares parabola δ = aα² + bα + c through per-bin frontier points.
struct FrontierFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double rmse = 0.0;
    /// The highest accepted point of each nonempty α-bin, in bin order.
    std::vector<DecisionPoint> frontier;

    double operator()(double alpha) const noexcept { return (a * alpha + b) * alpha + c; }
};

namespace detail {

/// Solves the 3x3 system m·x = rhs by Gaussian elimination with partial pivoting.
inline std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> rhs) {
    for (std::size_t col = 0; col < 3; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < 3; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) {
                pivot = r;
            }
        }
        if (m[pivot][col] == 0.0) {
            throw InsufficientDataError("frontier points do not determine a parabola");
        }
        std::swap(m[col], m[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t r = col + 1; r < 3; ++r) {
            const double f = m[r][col] / m[col][col];
            for (std::size_t k = col; k < 3; ++k) {
                m[r][k] -= f * m[col][k];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    std::array<double, 3> x{};
    for (std::size_t i = 3; i-- > 0;) {
        double acc = rhs[i];
        for (std::size_t k = i + 1; k < 3; ++k) {
            acc -= m[i][k] * x[k];
        }
        x[i] = acc / m[i][i];
    }
    return x;
}

}  // namespace detail

/// Fits the accepted/rejected frontier: per α-bin the highest accepted δ,
/// then an ordinary least-squares parabola through those points.
inline FrontierFit fit_frontier(std::span<const SweepRecord> records, std::size_t bins = 25) {
    if (bins == 0) {
        throw DomainError("fit_frontier needs at least one bin");
    }
    std::vector<std::optional<DecisionPoint>> top(bins);
    for (const SweepRecord& r : records) {
        if (!r.accepted) {
            continue;
        }
        const auto bin = std::min(bins - 1, static_cast<std::size_t>(r.point.alpha * static_cast<double>(bins)));
        if (!top[bin] || r.point.delta > top[bin]->delta) {
            top[bin] = r.point;
        }
    }

    FrontierFit fit;
    for (const auto& t : top) {
        if (t) {
            fit.frontier.push_back(*t);
        }
    }
    if (fit.frontier.size() < 3) {
        throw InsufficientDataError("fit_frontier needs accepted points in at least 3 alpha bins");
    }

    // Normal equations in the basis (α², α, 1).
    std::array<std::array<double, 3>, 3> gram{};
    std::array<double, 3> rhs{};
    for (const DecisionPoint& p : fit.frontier) {
        const std::array<double, 3> basis{p.alpha * p.alpha, p.alpha, 1.0};
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                gram[i][j] += basis[i] * basis[j];
            }
            rhs[i] += basis[i] * p.delta;
        }
    }
    const auto coef = detail::solve3(gram, rhs);
    fit.a = coef[0];
    fit.b = coef[1];
    fit.c = coef[2];

    double sq = 0.0;
    for (const DecisionPoint& p : fit.frontier) {
        const double r = fit(p.alpha) - p.delta;
        sq += r * r;
    }
    fit.rmse = std::sqrt(sq / static_cast<double>(fit.frontier.size()));
    return fit;
}

// ---------------------------------------------------------------------------
// Sensitivity to the number of criteria

enum class Metric { orness, dispersion, tradeoff };

inline constexpr std::array<Metric, 3> kAllMetrics{Metric::orness, Metric::dispersion, Metric::tradeoff};

inline std::string_view to_string(Metric m) noexcept {
    switch (m) {
    case Metric::orness:
        return "orness";
    case Metric::dispersion:
        return "dispersion";
    case Metric::tradeoff:
        return "tradeoff";
    }
    return "?";
}

inline Metric parse_metric(std::string_view name) {
    for (Metric m : kAllMetrics) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw DomainError("unknown metric '" + std::string(name) + "' (expected orness, dispersion or tradeoff)");
}

inline double evaluate(Metric m, const WeightVector& w) {
    switch (m) {
    case Metric::orness:
        return orness(w);
    case Metric::dispersion:
        return dispersion(w);
    case Metric::tradeoff:
        return tradeoff(w);
    }
    throw DomainError("unknown metric");
}

/// One metric of the generated weights over a resolution×resolution lattice
/// α = i/(r-1), δ = j/(r-1). Infeasible cells hold no value.
struct SensitivityGrid {
    std::size_t n = 0;
    Metric metric = Metric::orness;
    std::size_t resolution = 0;
    /// Row-major by α, then δ.
    std::vector<std::optional<double>> values;

    double alpha_at(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(resolution - 1); }
    double delta_at(std::size_t j) const { return static_cast<double>(j) / static_cast<double>(resolution - 1); }
    const std::optional<double>& at(std::size_t i, std::size_t j) const { return values.at(i * resolution + j); }
};

namespace detail {

inline void check_grid_args(std::size_t n, std::size_t resolution) {
    if (n < 2) {
        throw DimensionError("sensitivity grids need n >= 2");
    }
    if (resolution < 10) {
        throw DomainError("sensitivity grids need resolution >= 10");
    }
}

}  // namespace detail

/// The three metric grids for one n, sharing a single generation per cell.
inline std::array<SensitivityGrid, 3> sensitivity_grids(std::size_t n, std::size_t resolution,
                                                        double epsilon = kDefaultEpsilon) {
    detail::check_grid_args(n, resolution);
    std::array<SensitivityGrid, 3> grids;
    for (std::size_t k = 0; k < 3; ++k) {
        grids[k] = {n, kAllMetrics[k], resolution, std::vector<std::optional<double>>(resolution * resolution)};
    }
    CalibrationConfig config;
    config.epsilon = epsilon;
    parallel_for(resolution * resolution, [&](std::size_t cell) {
        const DecisionPoint p{grids[0].alpha_at(cell / resolution), grids[0].delta_at(cell % resolution)};
        try {
            const GenerationOutcome out = generate_weights(p, n, config);
            grids[0].values[cell] = out.achieved_orness;
            grids[1].values[cell] = out.achieved_dispersion;
            grids[2].values[cell] = out.achieved_tradeoff;
        } catch (const InfeasibleError&) {
        }
    });
    return grids;
}

inline SensitivityGrid sensitivity_grid(std::size_t n, Metric metric, std::size_t resolution,
                                        double epsilon = kDefaultEpsilon) {
    auto grids = sensitivity_grids(n, resolution, epsilon);
    return std::move(grids[static_cast<std::size_t>(metric)]);
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {

inline std::string csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace detail

/// alpha,delta,distance,accepted
inline void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records) {
    os << "alpha,delta,distance,accepted\n";
    for (const SweepRecord& r : records) {
        os << detail::csv_number(r.point.alpha) << ',' << detail::csv_number(r.point.delta) << ','
           << detail::csv_number(r.distance) << ',' << (r.accepted ? 1 : 0) << '\n';
    }
}

/// epsilon,rejected_fraction
inline void write_epsilon_curve_csv(std::ostream& os, std::span<const EpsilonCurvePoint> curve) {
    os << "epsilon,rejected_fraction\n";
    for (const EpsilonCurvePoint& p : curve) {
        os << detail::csv_number(p.epsilon) << ',' << detail::csv_number(p.rejected_fraction) << '\n';
    }
}

/// alpha,delta,value,feasible; infeasible cells leave `value` empty.
inline void write_grid_csv(std::ostream& os, const SensitivityGrid& grid) {
    os << "alpha,delta,value,feasible\n";
    for (std::size_t i = 0; i < grid.resolution; ++i) {
        for (std::size_t j = 0; j < grid.resolution; ++j) {
            const auto& v = grid.at(i, j);
            os << detail::csv_number(grid.alpha_at(i)) << ',' << detail::csv_number(grid.delta_at(j)) << ','
               << (v ? detail::csv_number(*v) : std::string()) << ',' << (v ? 1 : 0) << '\n';
        }
    }
}

/// grid_<metric>_n<k>.csv
inline std::string grid_file_name(const SensitivityGrid& grid) {
    return "grid_" + std::string(to_string(grid.metric)) + "_n" + std::to_string(grid.n) + ".csv";
}

}  // namespace owagen
