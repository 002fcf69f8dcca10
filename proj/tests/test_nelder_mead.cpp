#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "owagen/nelder_mead.hpp"

using namespace owagen;

TEST(NelderMead, ConvexQuadratic) {
    auto f = [](const Point<2>& p) { return std::pow(p[0] - 0.3, 2) + std::pow(p[1] - 0.7, 2); };
    const auto r = nelder_mead<2>(f, {0.0, 0.5}, {0.1, 0.1});
    EXPECT_NEAR(r.argmin[0], 0.3, 1e-6);
    EXPECT_NEAR(r.argmin[1], 0.7, 1e-6);
    EXPECT_LT(r.value, 1e-12);
    EXPECT_TRUE(r.converged);
    EXPECT_GT(r.evaluations, r.iterations);
}

TEST(NelderMead, ConstantObjectiveReturnsStart) {
    const auto r = nelder_mead<2>([](const Point<2>&) { return 4.25; }, {0.1, -2.0}, {0.5, 0.5});
    EXPECT_EQ(r.argmin[0], 0.1);
    EXPECT_EQ(r.argmin[1], -2.0);
    EXPECT_EQ(r.value, 4.25);
}

TEST(NelderMead, Rosenbrock) {
    auto f = [](const Point<2>& p) { return 100 * std::pow(p[1] - p[0] * p[0], 2) + std::pow(1 - p[0], 2); };
    const auto r = nelder_mead<2>(f, {-1.2, 1.0}, {0.1, 0.1});
    EXPECT_NEAR(r.argmin[0], 1.0, 1e-5);
    EXPECT_NEAR(r.argmin[1], 1.0, 1e-5);
}

TEST(NelderMead, NonFiniteStartThrows) {
    auto f = [](const Point<2>&) { return std::numeric_limits<double>::quiet_NaN(); };
    EXPECT_THROW(nelder_mead<2>(f, {0.0, 0.0}, {1.0, 1.0}), DomainError);
    auto g = [](const Point<2>&) { return std::numeric_limits<double>::infinity(); };
    EXPECT_THROW(nelder_mead<2>(g, {0.0, 0.0}, {1.0, 1.0}), DomainError);
}

TEST(NelderMead, NanAwayFromStartIsAvoided) {
    // Undefined for x < 0; the minimum sits on the boundary side of the domain.
    auto f = [](const Point<2>& p) {
        return p[0] < 0 ? std::numeric_limits<double>::quiet_NaN() : std::pow(p[0] - 0.5, 2) + p[1] * p[1];
    };
    const auto r = nelder_mead<2>(f, {2.0, 1.0}, {1.5, 1.5});
    EXPECT_NEAR(r.argmin[0], 0.5, 1e-6);
    EXPECT_NEAR(r.argmin[1], 0.0, 1e-6);
}

TEST(NelderMead, IterationCapIsHonoured) {
    SimplexConfig config;
    config.max_iterations = 5;
    auto f = [](const Point<2>& p) { return p[0] * p[0] + p[1] * p[1]; };
    const auto r = nelder_mead<2>(f, {3.0, 4.0}, {0.1, 0.1}, config);
    EXPECT_EQ(r.iterations, 5u);
    EXPECT_FALSE(r.converged);
}

TEST(NelderMead, OneDimension) {
    const auto r = nelder_mead<1>([](const Point<1>& p) { return std::cosh(p[0] - 2.0); }, {0.0}, {0.5});
    EXPECT_NEAR(r.argmin[0], 2.0, 1e-6);
}
