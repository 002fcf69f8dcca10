#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "owagen/normal.hpp"
#include "owagen/truncnorm.hpp"
#include "support/oracles.hpp"

using namespace owagen;

namespace {

const std::vector<double> kMus{-0.5, 0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.5};
const std::vector<double> kSigmas{0.01, 0.05, 0.1, 0.3, 1.0, 10.0};

}  // namespace

TEST(Normal, CdfMatchesKnownValues) {
    EXPECT_NEAR(normal::cdf(0.0), 0.5, 1e-16);
    EXPECT_NEAR(normal::cdf(1.0), 0.84134474606854293, 1e-15);
    EXPECT_NEAR(normal::cdf(-3.0), 0.0013498980316300946, 1e-17);
    EXPECT_NEAR(normal::cdf(-10.0) / 7.6198530241605269e-24, 1.0, 1e-12);
}

TEST(Normal, ScaledErfcIsContinuousAcrossBranch) {
    const double below = normal::erfcx(std::nextafter(10.0, 0.0));
    const double above = normal::erfcx(10.0);
    EXPECT_NEAR(below / above, 1.0, 1e-13);
    // Asymptote 1/(x√π).
    EXPECT_NEAR(normal::erfcx(1e6) * 1e6 * std::sqrt(M_PI), 1.0, 1e-12);
}

TEST(Normal, MassKeepsPrecisionInTails) {
    const double tail = normal::mass(8.0, 9.0);
    EXPECT_NEAR(tail / (normal::cdf(-8.0) - normal::cdf(-9.0)), 1.0, 1e-12);
    EXPECT_NEAR(normal::mass(-9.0, -8.0), tail, tail * 1e-14);
}

TEST(TruncatedMoments, CenteredParentHasCenteredMean) {
    for (double s : {1e-4, 0.01, 0.5, 3.0, 100.0, 1e3}) {
        EXPECT_NEAR(truncated_mean(0.5, s), 0.5, 1e-15) << s;
    }
}

TEST(TruncatedMoments, WideParentApproachesUniform) {
    EXPECT_NEAR(truncated_mean(0.5, 100.0), 0.5, 1e-4);
    EXPECT_NEAR(truncated_std(0.5, 100.0), 0.288675, 1e-4);
    EXPECT_LT(truncated_std(0.5, 1e3), kUniformStd);
    EXPECT_NEAR(truncated_std(0.5, 1e3), kUniformStd, 1e-7);
}

TEST(TruncatedMoments, NarrowParentCollapses) {
    EXPECT_NEAR(truncated_std(0.5, 1e-6), 1e-6, 1e-12);
    EXPECT_LT(truncated_std(0.5, 1e-9), 1e-8);
}

TEST(TruncatedMoments, InteriorPointAgainstSimpson) {
    const auto ref = oracle::truncated_normal_moments(0.3, 0.2);
    EXPECT_NEAR(truncated_mean(0.3, 0.2), ref.mean, 1e-10);
    EXPECT_NEAR(truncated_std(0.3, 0.2), ref.std, 1e-10);
}

TEST(TruncatedMoments, AgreeWithSimpsonOverGrid) {
    for (double mu : kMus) {
        for (double s : kSigmas) {
            const auto ref = oracle::truncated_normal_moments(mu, s, 20000);
            const Moments m = truncated_moments(mu, s);
            EXPECT_NEAR(m.mean, ref.mean, 1e-9) << mu << ' ' << s;
            EXPECT_NEAR(m.std, ref.std, 1e-9) << mu << ' ' << s;
        }
    }
}

TEST(TruncatedMoments, AgreeWithAdaptiveOracleOverGrid) {
    for (double mu : kMus) {
        for (double s : kSigmas) {
            const Moments closed = truncated_moments(mu, s);
            const Moments quad = oracle_moments(mu, s);
            EXPECT_NEAR(closed.mean, quad.mean, 1e-9) << mu << ' ' << s;
            EXPECT_NEAR(closed.std, quad.std, 1e-9) << mu << ' ' << s;
        }
    }
}

TEST(TruncatedMoments, AgreeWithAdaptiveOracleAtSearchBoxCorners) {
    for (double mu : {-5.0, -1.0, 2.0, 6.0}) {
        for (double s : {1e-3, 0.5, 20.0, 60.0, 1e3}) {
            const Moments closed = truncated_moments(mu, s);
            const Moments quad = oracle_moments(mu, s);
            EXPECT_NEAR(closed.mean, quad.mean, 1e-9) << mu << ' ' << s;
            EXPECT_NEAR(closed.std, quad.std, 1e-9) << mu << ' ' << s;
        }
    }
}

TEST(TruncatedMoments, MirrorSymmetry) {
    for (double mu = -2.0; mu <= 3.0; mu += 0.0625) {
        for (double s : {0.005, 0.02, 0.1, 0.4, 2.0, 30.0, 500.0}) {
            const Moments a = truncated_moments(mu, s);
            const Moments b = truncated_moments(1.0 - mu, s);
            EXPECT_NEAR(a.mean + b.mean, 1.0, 1e-10) << mu << ' ' << s;
            EXPECT_NEAR(a.std, b.std, 1e-10) << mu << ' ' << s;
        }
    }
}

TEST(TruncatedMoments, StdStaysBelowUniformBound) {
    for (double mu = -5.0; mu <= 6.0; mu += 0.25) {
        for (double ls = -6.0; ls <= 3.0; ls += 0.25) {
            const Moments m = truncated_moments(mu, std::pow(10.0, ls));
            EXPECT_LT(m.std, kUniformStd) << mu << ' ' << ls;
            EXPECT_GE(m.mean, 0.0);
            EXPECT_LE(m.mean, 1.0);
        }
    }
}

TEST(TruncatedMoments, InvalidSigmaThrows) {
    EXPECT_THROW(truncated_moments(0.5, 0.0), DomainError);
    EXPECT_THROW(truncated_moments(0.5, -1.0), DomainError);
    EXPECT_THROW(truncated_moments(NAN, 1.0), DomainError);
}

TEST(Oracle, KnownShapes) {
    EXPECT_NEAR(oracle_moments(0.5, 0.5).mean, 0.5, 1e-14);
    const Moments right = oracle_moments(2.0, 0.5);
    EXPECT_GT(right.mean, 0.5);
    EXPECT_LT(right.mean, 1.0);
    const auto ref = oracle::truncated_normal_moments(0.3, 0.2);
    EXPECT_NEAR(oracle_moments(0.3, 0.2).mean, ref.mean, 1e-10);
    EXPECT_NEAR(oracle_moments(0.3, 0.2).std, ref.std, 1e-10);
}

TEST(Pdf, SymmetricAboutCenterAndZeroOutside) {
    const auto spec = TruncNormSpec::from_parent(0.5, 10.0);
    EXPECT_DOUBLE_EQ(pdf(spec, 0.2), pdf(spec, 0.8));
    EXPECT_EQ(pdf(spec, -0.1), 0.0);
    EXPECT_EQ(pdf(spec, 1.1), 0.0);
    EXPECT_EQ(pdf(TruncNormSpec::from_parent(0.3, 0.2), -0.1), 0.0);
}

TEST(Pdf, NormalizesOverGrid) {
    for (double mu : kMus) {
        for (double s : kSigmas) {
            const auto spec = TruncNormSpec::from_parent(mu, s);
            const double total = oracle::simpson_focused([&](double x) { return pdf(spec, x); },
                                                         std::clamp(mu, 0.0, 1.0), oracle::focus_width(mu, s), 20000);
            EXPECT_NEAR(total, 1.0, 1e-10) << mu << ' ' << s;
        }
    }
}

TEST(Pdf, MatchesDirectFormulaInTheInterior) {
    const double mu = 0.3;
    const double s = 0.2;
    const double z = normal::cdf((1.0 - mu) / s) - normal::cdf(-mu / s);
    const auto spec = TruncNormSpec::from_parent(mu, s);
    for (double x : {0.0, 0.1, 0.25, 0.5, 0.9, 1.0}) {
        const double direct = std::exp(-0.5 * std::pow((x - mu) / s, 2)) / (s * std::sqrt(2.0 * M_PI) * z);
        EXPECT_NEAR(pdf(spec, x), direct, 1e-13) << x;
    }
}

TEST(Pdf, FiniteFarInTheTail) {
    // Parent mass on [0,1] is about 1e-545 here, beyond double range.
    const auto spec = TruncNormSpec::from_parent(-0.5, 0.01);
    EXPECT_GT(pdf(spec, 0.0), 0.0);
    EXPECT_TRUE(std::isfinite(pdf(spec, 0.0)));
    EXPECT_NEAR(spec.mu_w, 2e-4, 1e-6);
}
