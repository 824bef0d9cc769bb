#include "bcp/error.hpp"
#include "bcp/quadrature.hpp"
#include "bcp/transforms.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace bcp;

namespace {

constexpr double kE = 2.718281828459045;

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::NumericFailure;
}

GeneralBoundary upper_const(double v, double T = 1.0) {
    return GeneralBoundary::constant(BoundarySide::Upper, T, v);
}
GeneralBoundary lower_const(double v, double T = 1.0) {
    return GeneralBoundary::constant(BoundarySide::Lower, T, v);
}
GeneralBoundary no_lower(double T = 1.0) { return GeneralBoundary::infinite(BoundarySide::Lower, T); }

}  // namespace

TEST(Quadrature, AdaptiveSimpsonMatchesFineGrid) {
    auto f = [](double u) { return std::exp(2.0 * u + u * u); };
    EXPECT_NEAR(adaptive_simpson(f, 0.0, 1.0), oracle::simpson_grid(f, 0.0, 1.0), 1e-9);
    EXPECT_NEAR(adaptive_simpson([](double u) { return std::cos(u); }, 0.0, 2.0), std::sin(2.0),
                1e-10);
    EXPECT_EQ(adaptive_simpson(f, 0.5, 0.5), 0.0);
}

TEST(Quadrature, AdaptiveSimpsonReportsFailure) {
    EXPECT_EQ(kind_of([] {
                  (void)adaptive_simpson([](double u) { return std::sin(1.0 / (u + 1e-6)); }, 0.0,
                                         1.0, SimpsonOptions{1e-14, 4});
              }),
              ErrorKind::NumericFailure);
}

TEST(Quadrature, InvertIncreasing) {
    auto f = [](double x) { return x * x * x + x; };
    const double x = invert_increasing(f, 10.0, 0.0, 5.0);
    EXPECT_NEAR(f(x), 10.0, 1e-10);
    EXPECT_NEAR(x, 2.0, 1e-11);
}

TEST(Quadrature, CumulativeIntegralAndInverse) {
    const CumulativeIntegral F([](double u) { return 1.0 + std::cos(u); }, 3.0);
    for (double t : {0.0, 0.3, 1.7, 2.99, 3.0}) EXPECT_NEAR(F(t), t + std::sin(t), 1e-10);
    EXPECT_NEAR(F.total(), 3.0 + std::sin(3.0), 1e-10);
    EXPECT_NEAR(F.inverse(1.2 + std::sin(1.2)), 1.2, 1e-9);
}

TEST(Reduction, OuConstantBoundaryIsSquareRoot) {
    const auto red = reduce_ou({0.5, 0.0, 1.0, 0.0}, no_lower(), upper_const(1.0), 1.0);
    EXPECT_NEAR(red.horizon, kE - 1.0, 1e-14);
    EXPECT_FALSE(red.lower.is_finite());
    for (int k = 0; k < 100; ++k) {
        const double s = red.horizon * k / 99.0;
        ASSERT_NEAR(red.upper(s), std::sqrt(1.0 + s), 1e-12);
        ASSERT_NEAR(red.clock(red.time_map(s)), s, 1e-12);
    }
    EXPECT_EQ(red.source.family, Family::OU);
}

TEST(Reduction, OuGeneralBoundaryFormula) {
    const OuSpec spec{1.3, 0.4, 0.7, 0.1};
    const GeneralBoundary b(BoundarySide::Upper, 2.0, [](double t) { return 1.0 + 0.2 * t; });
    const GeneralBoundary a(BoundarySide::Lower, 2.0, [](double t) { return -0.5 - 0.1 * t; });
    const auto red = reduce_ou(spec, a, b, 2.0);
    const double k = spec.kappa, s2 = spec.sigma * spec.sigma;
    EXPECT_NEAR(red.horizon, s2 * std::expm1(2 * k * 2.0) / (2 * k), 1e-12);
    for (double s : {0.0, 0.1, 1.0, red.horizon}) {
        const double t = std::log1p(2 * k * s / s2) / (2 * k);
        const double root = std::sqrt(1 + 2 * k * s / s2);
        EXPECT_NEAR(red.time_map(s), t, 1e-12);
        EXPECT_NEAR(red.upper(s), spec.alpha - spec.x0 + (b(t) - spec.alpha) * root, 1e-12);
        EXPECT_NEAR(red.lower(s), spec.alpha - spec.x0 + (a(t) - spec.alpha) * root, 1e-12);
    }
}

TEST(Reduction, TimeVaryingOuWithConstantHandlesMatchesOu) {
    const OuSpec fixed{0.8, 0.3, 0.6, 0.1};
    const OuTimeVaryingSpec varying{TimeFunction{[](double) { return 0.8; }, std::nullopt},
                                    TimeFunction{[](double) { return 0.3; }, std::nullopt},
                                    TimeFunction{[](double) { return 0.6; }, std::nullopt}, 0.1};
    const GeneralBoundary b(BoundarySide::Upper, 1.5, [](double t) { return 1.0 + 0.3 * t * t; });
    const auto r1 = reduce_ou(fixed, no_lower(1.5), b, 1.5);
    const auto r2 = reduce_ou_td(varying, no_lower(1.5), b, 1.5);
    EXPECT_NEAR(r1.horizon, r2.horizon, 1e-9);
    for (int k = 0; k <= 20; ++k) {
        const double s = r1.horizon * k / 20.0;
        EXPECT_NEAR(r1.time_map(s), r2.time_map(s), 1e-8);
        EXPECT_NEAR(r1.upper(s), r2.upper(s), 1e-8);
    }
}

TEST(Reduction, TimeVaryingOuMeanFollowsDrift) {
    // Boundaries placed symmetrically about the mean m' = kappa (alpha - m),
    // m(0) = x0, must stay symmetric about 0 after the reduction.
    auto kappa = [](double t) { return 1.0 + 0.5 * t; };
    auto alpha = [](double t) { return 0.3 * std::sin(2.0 * t); };
    const double x0 = 0.2, T = 1.0;
    const int steps = 200000;
    std::vector<double> m(steps + 1);
    m[0] = x0;
    const double h = T / steps;
    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        auto f = [&](double tt, double mm) { return kappa(tt) * (alpha(tt) - mm); };
        const double k1 = f(t, m[i]);
        const double k2 = f(t + h / 2, m[i] + h / 2 * k1);
        const double k3 = f(t + h / 2, m[i] + h / 2 * k2);
        const double k4 = f(t + h, m[i] + h * k3);
        m[i + 1] = m[i] + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    auto mean = [&](double t) {
        const double pos = t / h;
        const auto i = std::min<std::size_t>(static_cast<std::size_t>(pos), steps - 1);
        return m[i] + (pos - i) * (m[i + 1] - m[i]);
    };
    const OuTimeVaryingSpec spec{TimeFunction{kappa, std::nullopt},
                                 TimeFunction{alpha, std::nullopt},
                                 TimeFunction{[](double t) { return 0.5 + 0.2 * t; }, std::nullopt},
                                 x0};
    const GeneralBoundary a(BoundarySide::Lower, T, [&](double t) { return mean(t) - 1.0; });
    const GeneralBoundary b(BoundarySide::Upper, T, [&](double t) { return mean(t) + 1.0; });
    const auto red = reduce_ou_td(spec, a, b, T);
    for (int k = 0; k <= 10; ++k) {
        const double s = red.horizon * k / 10.0;
        EXPECT_NEAR(red.upper(s) + red.lower(s), 0.0, 1e-6) << "s=" << s;
    }
}

TEST(Reduction, GrowthConstantBoundaryIsSquareRoot) {
    const auto red = reduce_growth({0.5, 0.5, 1.0, 1.0}, lower_const(0.0), upper_const(kE), 1.0);
    EXPECT_NEAR(red.horizon, kE - 1.0, 1e-14);
    EXPECT_FALSE(red.lower.is_finite());
    for (int k = 0; k < 100; ++k) {
        const double s = red.horizon * k / 99.0;
        ASSERT_NEAR(red.upper(s), std::sqrt(1.0 + s), 1e-12);
    }
}

TEST(Reduction, GrowthGeneralFormula) {
    const GrowthSpec g{0.3, 0.4, 0.5, 1.2};
    const auto red = reduce_growth(g, lower_const(0.6), upper_const(2.0), 1.0);
    const double k = (g.sigma * g.sigma - 2 * g.alpha) / (2 * g.beta);
    for (double s : {0.0, 0.4, red.horizon}) {
        const double root = std::sqrt(1 + 2 * g.beta * s);
        EXPECT_NEAR(red.upper(s), root / g.sigma * (std::log(2.0) + k) - (std::log(1.2) + k) / g.sigma,
                    1e-12);
        EXPECT_NEAR(red.lower(s), root / g.sigma * (std::log(0.6) + k) - (std::log(1.2) + k) / g.sigma,
                    1e-12);
    }
}

TEST(Reduction, GbmTimeVaryingRate) {
    const GbmSpec spec{0.1, TimeFunction{[](double t) { return 0.1 + 0.05 * std::exp(-t); },
                                         std::nullopt},
                       10.0};
    const auto red = reduce_gbm(spec, lower_const(0.0), upper_const(12.0), 1.0);
    EXPECT_DOUBLE_EQ(red.horizon, 1.0);
    EXPECT_NEAR(red.upper(0.0), 10.0 * std::log(1.2), 1e-12);
    for (double t : {0.1, 0.5, 1.0}) {
        EXPECT_NEAR(red.upper(t), 10 * std::log(1.2) - 0.5 - 0.95 * t + 0.5 * std::exp(-t), 1e-9);
        EXPECT_DOUBLE_EQ(red.time_map(t), t);
    }
}

TEST(Reduction, GbmDegeneratesToLogBoundary) {
    const GbmSpec spec{1.0, TimeFunction::of_constant(0.0), 1.0};
    const GeneralBoundary b(BoundarySide::Upper, 1.0, [](double t) { return 2.0 + t; });
    const auto red = reduce_gbm(spec, lower_const(0.0), b, 1.0);
    for (double t : {0.0, 0.3, 1.0}) EXPECT_NEAR(red.upper(t), std::log(2.0 + t) + t / 2, 1e-13);
}

TEST(Reduction, Validation) {
    EXPECT_EQ(kind_of([] { (void)reduce_ou({0.5, 0.0, 1.0, 2.0}, no_lower(), upper_const(1.0), 1.0); }),
              ErrorKind::StartOutsideBand);
    EXPECT_EQ(kind_of([] { (void)reduce_ou({0.5, 0.0, -1.0, 0.0}, no_lower(), upper_const(1.0), 1.0); }),
              ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] {
                  const GeneralBoundary b(BoundarySide::Upper, 1.0, [](double t) { return 1.0 - 2 * t; });
                  (void)reduce_ou({0.5, 0.0, 1.0, 0.0}, lower_const(-0.5), b, 1.0);
              }),
              ErrorKind::InvalidBoundaries);
    EXPECT_EQ(kind_of([] {
                  (void)reduce_growth({0.5, 0.5, 1.0, 1.0}, lower_const(-1.0), upper_const(2.0), 1.0);
              }),
              ErrorKind::InvalidBoundaries);
    EXPECT_EQ(kind_of([] {
                  (void)reduce_gbm({0.1, TimeFunction::of_constant(0.0), 1.0}, lower_const(0.0),
                                   GeneralBoundary::infinite(BoundarySide::Upper, 1.0), 1.0);
              }),
              ErrorKind::InvalidBoundaries);
}

TEST(Reduction, DispatchAndFamilies) {
    const DiffusionSpec spec = GrowthSpec{0.5, 0.5, 1.0, 1.0};
    EXPECT_EQ(family_of(spec), Family::Growth);
    EXPECT_EQ(reducibility_class(Family::Growth), ReducibilityClass::G);
    EXPECT_EQ(reducibility_class(Family::GBM), ReducibilityClass::G);
    EXPECT_EQ(reducibility_class(Family::OU), ReducibilityClass::L);
    EXPECT_EQ(reducibility_class(Family::OuTimeVarying), ReducibilityClass::L);
    const auto red = reduce(spec, lower_const(0.0), upper_const(kE), 1.0);
    EXPECT_NEAR(red.upper(1.0), std::sqrt(2.0), 1e-12);
}

TEST(Reducibility, LinearClassPasses) {
    const auto r = check_reducibility([](double t, double x) { return (1 + t) * (0.5 - x) + t; },
                                      [](double t, double) { return 0.5 + t; }, {});
    EXPECT_TRUE(r.reducible) << r.max_residual;
}

TEST(Reducibility, GrowthClassPasses) {
    ReducibilityGrid grid;
    grid.x_min = 0.5;
    grid.x_max = 3.0;
    const auto r = check_reducibility(
        [](double t, double x) { return (0.3 + t) * x - 0.2 * x * std::log(x); },
        [](double, double x) { return 0.4 * x; }, grid);
    EXPECT_TRUE(r.reducible) << r.max_residual;
}

TEST(Reducibility, QuadraticDriftFails) {
    const auto r = check_reducibility([](double, double x) { return x * x; },
                                      [](double, double) { return 1.0; }, {});
    EXPECT_FALSE(r.reducible);
    EXPECT_GT(r.max_residual, 1.0);
}

TEST(Reducibility, NonPositiveSigmaRejected) {
    EXPECT_EQ(kind_of([] {
                  (void)check_reducibility([](double, double) { return 0.0; },
                                           [](double, double x) { return x; }, {});
              }),
              ErrorKind::InvalidDomain);
}
