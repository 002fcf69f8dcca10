#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

#include "owagen/error.hpp"

namespace owagen {

template <std::size_t N>
using Point = std::array<double, N>;

/// Coefficients and stopping rules for the downhill simplex.
struct SimplexConfig {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    /// Stop once every vertex lies within this distance of the best one...
    double diameter_tol = 1e-12;
    /// ...or once the objective values across the simplex differ by less than this.
    double spread_tol = 1e-14;
    std::size_t max_iterations = 2000;
};

template <std::size_t N>
struct SimplexResult {
    Point<N> argmin{};
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Nelder-Mead minimization of `objective` from `start`.
///
/// The initial simplex is `start` plus one vertex displaced by `step[j]`
/// along each axis j. Non-finite objective values are treated as +inf, so
/// an objective may return infinity to veto a region. Ties keep the older
/// vertex ahead, which makes a constant objective return `start` untouched.
template <std::size_t N, class Objective>
SimplexResult<N> nelder_mead(Objective&& objective, const Point<N>& start, const Point<N>& step,
                             const SimplexConfig& config = {}) {
    static_assert(N >= 1);
    constexpr double inf = std::numeric_limits<double>::infinity();

    SimplexResult<N> result;
    auto eval = [&](const Point<N>& p) {
        ++result.evaluations;
        const double v = objective(p);
        return std::isnan(v) ? inf : v;
    };

    std::array<Point<N>, N + 1> vertex;
    std::array<double, N + 1> value;
    vertex[0] = start;
    value[0] = eval(start);
    if (!std::isfinite(value[0])) {
        throw DomainError("objective is not finite at the start point");
    }
    for (std::size_t j = 0; j < N; ++j) {
        vertex[j + 1] = start;
        vertex[j + 1][j] += step[j];
        value[j + 1] = eval(vertex[j + 1]);
    }

    std::array<std::size_t, N + 1> order;
    auto sort_vertices = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t l, std::size_t r) { return value[l] < value[r]; });
        std::array<Point<N>, N + 1> v2;
        std::array<double, N + 1> f2;
        for (std::size_t i = 0; i <= N; ++i) {
            v2[i] = vertex[order[i]];
            f2[i] = value[order[i]];
        }
        vertex = v2;
        value = f2;
    };

    auto converged = [&] {
        if (value[N] - value[0] < config.spread_tol) {
            return true;
        }
        double diameter = 0.0;
        for (std::size_t i = 1; i <= N; ++i) {
            for (std::size_t j = 0; j < N; ++j) {
                diameter = std::max(diameter, std::abs(vertex[i][j] - vertex[0][j]));
            }
        }
        return diameter < config.diameter_tol;
    };

    auto along = [](const Point<N>& from, const Point<N>& to, double t) {
        Point<N> p;
        for (std::size_t j = 0; j < N; ++j) {
            p[j] = from[j] + t * (to[j] - from[j]);
        }
        return p;
    };

    sort_vertices();
    while (result.iterations < config.max_iterations) {
        if (converged()) {
            result.converged = true;
            break;
        }
        ++result.iterations;

        Point<N> centroid{};
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = 0; j < N; ++j) {
                centroid[j] += vertex[i][j] / static_cast<double>(N);
            }
        }
        const Point<N>& worst = vertex[N];

        const Point<N> reflected = along(centroid, worst, -config.reflection);
        const double f_reflected = eval(reflected);

        if (f_reflected < value[0]) {
            const Point<N> expanded = along(centroid, worst, -config.reflection * config.expansion);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                vertex[N] = expanded;
                value[N] = f_expanded;
            } else {
                vertex[N] = reflected;
                value[N] = f_reflected;
            }
        } else if (f_reflected < value[N - 1]) {
            vertex[N] = reflected;
            value[N] = f_reflected;
        } else {
            bool accepted = false;
            if (f_reflected < value[N]) {
                const Point<N> outside = along(centroid, worst, -config.reflection * config.contraction);
                const double f_outside = eval(outside);
                if (f_outside <= f_reflected) {
                    vertex[N] = outside;
                    value[N] = f_outside;
                    accepted = true;
                }
            } else {
                const Point<N> inside = along(centroid, worst, config.contraction);
                const double f_inside = eval(inside);
                if (f_inside < value[N]) {
                    vertex[N] = inside;
                    value[N] = f_inside;
                    accepted = true;
                }
            }
            if (!accepted) {
                for (std::size_t i = 1; i <= N; ++i) {
                    vertex[i] = along(vertex[0], vertex[i], config.shrink);
                    value[i] = eval(vertex[i]);
                }
            }
        }
        sort_vertices();
    }
    if (!result.converged && converged()) {
        result.converged = true;
    }

    result.argmin = vertex[0];
    result.value = value[0];
    return result;
}

}  // namespace owagen
