#include "bcp/error.hpp"
#include "bcp/kernel.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

using namespace bcp;

namespace {

PiecewiseLinearBand band_from(const Partition& p, std::vector<double> lower,
                              std::vector<double> upper) {
    return PiecewiseLinearBand(PiecewiseLinearBoundary::continuous(p, BoundarySide::Lower, lower),
                               PiecewiseLinearBoundary::continuous(p, BoundarySide::Upper, upper));
}

PiecewiseLinearBand upper_only(const Partition& p, std::vector<double> upper) {
    return PiecewiseLinearBand(PiecewiseLinearBoundary::infinite(p, BoundarySide::Lower),
                               PiecewiseLinearBoundary::continuous(p, BoundarySide::Upper, upper));
}

PiecewiseLinearBand lower_only(const Partition& p, std::vector<double> lower) {
    return PiecewiseLinearBand(PiecewiseLinearBoundary::continuous(p, BoundarySide::Lower, lower),
                               PiecewiseLinearBoundary::infinite(p, BoundarySide::Upper));
}

// n = 1: E g(W_T) integrated against the normal density.
double quadrature_n1(const PiecewiseLinearBand& band, const SeriesConfig& cfg = {}) {
    const double T = band.partition().horizon();
    const double lo = std::max(band.lower().binding_value(1), -12.0 * std::sqrt(T));
    const double hi = std::min(band.upper().binding_value(1), 12.0 * std::sqrt(T));
    return oracle::gaussian_expectation(
        [&](double x) {
            const double xs[1] = {x};
            return crossing_kernel(band, xs, cfg);
        },
        T, lo, hi);
}

struct RandomBand {
    std::vector<double> lower, upper, x;
};

RandomBand random_band(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> width(0.2, 2.0);
    std::normal_distribution<double> z;
    RandomBand r;
    for (std::size_t i = 0; i <= n; ++i) {
        const double mid = 0.3 * z(rng);
        r.lower.push_back(mid - width(rng));
        r.upper.push_back(mid + width(rng));
    }
    r.lower[0] = -width(rng);
    r.upper[0] = width(rng);
    for (std::size_t i = 1; i <= n; ++i) r.x.push_back(1.5 * z(rng));
    return r;
}

}  // namespace

TEST(NormalCdf, ValuesAndLowerTail) {
    EXPECT_NEAR(normal_cdf(1.0), 0.8413447460685429, 1e-15);
    EXPECT_NEAR(normal_cdf(-1.0), 0.15865525393145705, 1e-15);
    EXPECT_NEAR(log_normal_cdf(-20.0), std::log(oracle::Phi(-20.0)), 1e-12);
    // continuity across the asymptotic switch
    EXPECT_NEAR(log_normal_cdf(-30.0 + 1e-9), log_normal_cdf(-30.0 - 1e-9), 1e-6);
    const double z = -60.0;
    const double series = -0.5 * z * z - std::log(-z) - 0.5 * std::log(2.0 * std::numbers::pi) +
                          std::log1p(-1.0 / (z * z) + 3.0 / std::pow(z, 4));
    EXPECT_NEAR(log_normal_cdf(z), series, 1e-9);
}

TEST(HTerm, SymmetricUnitBand) {
    const Partition p({0.0, 1.0});
    const auto band = band_from(p, {-1.0, -1.0}, {1.0, 1.0});
    EXPECT_NEAR(h_term(1, 1, 0.0, 0.0, band), 2 * std::exp(-2.0) - 2 * std::exp(-8.0), 1e-15);
    EXPECT_NEAR(h_term(1, 2, 0.0, 0.0, band), 2 * std::exp(-18.0) - 2 * std::exp(-32.0), 1e-20);
}

TEST(HTerm, MatchesBridgeImageSeries) {
    // Brownian bridge 0 -> 0 over unit time stays in (-1, 1) with probability
    // 1 - 2 sum_k (-1)^(k-1) exp(-2 k^2 w^2 / 4), w = 2.
    const Partition p({0.0, 1.0});
    const auto band = band_from(p, {-1.0, -1.0}, {1.0, 1.0});
    double kolmogorov = 1.0;
    for (int k = 1; k < 20; ++k) kolmogorov -= 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k);
    const double xs[1] = {0.0};
    EXPECT_NEAR(g_two_sided(band, xs), kolmogorov, 1e-14);
}

TEST(Kernel, OneSidedIndicatorAndBridgeFactor) {
    const Partition p({0.0, 0.5, 1.0});
    const auto band = upper_only(p, {1.0, 1.5, 1.2});
    const double inside[2] = {0.4, 0.1};
    const double f1 = 1.0 - std::exp(-2.0 * (1.0 - 0.0) * (1.5 - 0.4) / 0.5);
    const double f2 = 1.0 - std::exp(-2.0 * (1.5 - 0.4) * (1.2 - 0.1) / 0.5);
    EXPECT_NEAR(g_one_sided(band, inside), f1 * f2, 1e-15);
    const double outside[2] = {1.6, 0.1};
    EXPECT_EQ(g_one_sided(band, outside), 0.0);
}

TEST(Kernel, JumpUsesBindingValueAndIntervalSides) {
    const Partition p({0.0, 0.5, 1.0});
    // upper jumps from 2 (left of t1) to 3 (right of t1)
    const PiecewiseLinearBand band(PiecewiseLinearBoundary::infinite(p, BoundarySide::Lower),
                                   PiecewiseLinearBoundary(p, BoundarySide::Upper, {1.0, 3.0},
                                                           {2.0, 3.0}));
    const double above_left[2] = {2.5, 0.0};
    EXPECT_EQ(g_one_sided(band, above_left), 0.0);
    const double xs[2] = {1.0, 0.0};
    const double f1 = 1.0 - std::exp(-2.0 * 1.0 * (2.0 - 1.0) / 0.5);
    const double f2 = 1.0 - std::exp(-2.0 * (3.0 - 1.0) * 3.0 / 0.5);
    EXPECT_NEAR(g_one_sided(band, xs), f1 * f2, 1e-15);
}

TEST(Kernel, ValuesStayInUnitInterval) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 1 + trial % 6;
        auto r = random_band(rng, n);
        std::vector<double> nodes(n + 1);
        for (std::size_t i = 0; i <= n; ++i) nodes[i] = 0.05 * static_cast<double>(i) * (1 + trial % 3);
        const Partition p(nodes);
        const auto band = band_from(p, r.lower, r.upper);
        const double g2 = crossing_kernel(band, r.x);
        ASSERT_GE(g2, 0.0);
        ASSERT_LE(g2, 1.0);
        const double g1 = crossing_kernel(upper_only(p, r.upper), r.x);
        ASSERT_GE(g1, 0.0);
        ASSERT_LE(g1, 1.0);
        ASSERT_LE(g2, g1 + 1e-12);
    }
}

TEST(Kernel, MonotoneUnderWidening) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> grow(0.0, 0.3);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + trial % 4;
        auto r = random_band(rng, n);
        const auto p = uniform_partition(0.2 * static_cast<double>(n), n);
        auto wide = r;
        for (std::size_t i = 0; i <= n; ++i) {
            wide.lower[i] -= grow(rng);
            wide.upper[i] += grow(rng);
        }
        const double narrow_g = crossing_kernel(band_from(p, r.lower, r.upper), r.x);
        const double wide_g = crossing_kernel(band_from(p, wide.lower, wide.upper), r.x);
        ASSERT_LE(narrow_g, wide_g + 1e-14) << "trial " << trial;
    }
}

TEST(Kernel, FarLowerBoundaryMatchesOneSided) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const double T = 0.5 + 0.5 * (trial % 3);
        const auto p = uniform_partition(T, n);
        std::vector<double> upper(n + 1), lower(n + 1, -20.0 * std::sqrt(T));
        for (auto& u : upper) u = 0.5 + std::abs(z(rng));
        std::vector<double> x(n);
        for (auto& v : x) v = z(rng) * std::sqrt(T / n);
        const double two = crossing_kernel(band_from(p, lower, upper), x);
        const double one = crossing_kernel(upper_only(p, upper), x);
        ASSERT_NEAR(two, one, 1e-9);
    }
}

TEST(Kernel, LowerOnlyIsReflectionOfUpperOnly) {
    const Partition p({0.0, 0.3, 1.0});
    const double xs[2] = {-0.2, 0.4};
    const double ys[2] = {0.2, -0.4};
    EXPECT_NEAR(crossing_kernel(lower_only(p, {-1.0, -0.7, -1.3}), xs),
                crossing_kernel(upper_only(p, {1.0, 0.7, 1.3}), ys), 1e-15);
}

TEST(Kernel, SeriesTruncationIsStable) {
    // per-interval factor: J = 6 vs J = 40 whenever delta^2 / dt >= 1
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SeriesConfig six{6, 0.0}, forty{40, 0.0};
    for (int trial = 0; trial < 500; ++trial) {
        const double dt = 0.25 + 0.75 * (trial % 4) / 3.0;
        const double delta = std::sqrt(dt) * (1.0 + 0.5 * (trial % 5));
        const double a = -delta * (0.2 + 0.6 * std::abs(u(rng)));
        const Partition p({0.0, dt});
        const auto band = band_from(p, {a, a}, {a + delta, a + delta});
        const double xs[1] = {a + delta * (0.5 + 0.45 * u(rng))};
        ASSERT_LT(std::abs(g_two_sided(band, xs, six) - g_two_sided(band, xs, forty)), 1e-8);
    }
}

TEST(Kernel, NarrowBandHitsSeriesCap) {
    const Partition p({0.0, 1.0});
    const auto band = band_from(p, {-0.01, -0.01}, {0.01, 0.01});
    const double xs[1] = {0.0};
    SeriesDiagnostics diag;
    const double g = g_two_sided(band, xs, SeriesConfig{}, &diag);
    EXPECT_TRUE(diag.cap_hit);
    EXPECT_EQ(diag.most_terms, kSeriesHardCap);
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, 1.0);
}

TEST(Kernel, QuadratureAtOneIntervalMatchesClosedForms) {
    const Partition p1({0.0, 1.0});
    EXPECT_NEAR(quadrature_n1(upper_only(p1, {1.0, 1.0})), oracle::reflection(1.0, 1.0), 1e-8);
    const Partition p2({0.0, 2.0});
    EXPECT_NEAR(quadrature_n1(upper_only(p2, {0.7, 1.9})),
                oracle::linear_one_sided(0.7, 0.6, 2.0), 1e-8);
    EXPECT_NEAR(quadrature_n1(upper_only(p2, {0.7, 1.9})), bcp_linear_one_sided(0.7, 0.6, 2.0),
                1e-8);
    const double series = oracle::two_barrier(-1.0, 1.0, 1.0);
    EXPECT_NEAR(series, oracle::two_barrier_sine(-1.0, 1.0, 1.0), 1e-12);
    EXPECT_NEAR(quadrature_n1(band_from(p1, {-1.0, -1.0}, {1.0, 1.0})), series, 1e-6);
    EXPECT_NEAR(quadrature_n1(band_from(p1, {-0.5, -0.5}, {1.5, 1.5})),
                oracle::two_barrier(-0.5, 1.5, 1.0), 1e-6);
}

TEST(Kernel, SixTermsSufficeForUnitBand) {
    const Partition p({0.0, 1.0});
    const auto band = band_from(p, {-1.0, -1.0}, {1.0, 1.0});
    EXPECT_LT(std::abs(quadrature_n1(band, {6, 0.0}) - quadrature_n1(band, {12, 0.0})), 1e-10);
}

TEST(Kernel, LinearClosedFormRejectsStartOnBoundary) {
    EXPECT_NEAR(bcp_linear_one_sided(1.0, 0.0, 1.0), oracle::reflection(1.0, 1.0), 1e-15);
    EXPECT_NEAR(bcp_linear_one_sided(2.0, -1.5, 3.0), oracle::linear_one_sided(2.0, -1.5, 3.0),
                1e-14);
    // large positive slope: second term underflows harmlessly
    EXPECT_NEAR(bcp_linear_one_sided(5.0, 200.0, 1.0), 1.0, 1e-15);
    try {
        (void)bcp_linear_one_sided(0.0, 1.0, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::StartOutsideBand);
    }
}

TEST(CompiledBand, AgreesWithReferenceKernel) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + trial % 7;
        auto r = random_band(rng, n);
        const auto p = uniform_partition(0.1 * static_cast<double>(n), n);
        for (const auto& band : {band_from(p, r.lower, r.upper), upper_only(p, r.upper),
                                 lower_only(p, r.lower)}) {
            const CompiledBand compiled(band, SeriesConfig{});
            ASSERT_NEAR(compiled(r.x), crossing_kernel(band, r.x), 1e-15);
        }
    }
}

TEST(CompiledBand, KindsAndStartCheck) {
    const Partition p({0.0, 1.0});
    const PiecewiseLinearBand none(PiecewiseLinearBoundary::infinite(p, BoundarySide::Lower),
                                   PiecewiseLinearBoundary::infinite(p, BoundarySide::Upper));
    const CompiledBand c(none, {});
    EXPECT_EQ(c.kind(), CompiledBand::Kind::Unbounded);
    const double xs[1] = {3.0};
    EXPECT_EQ(c(xs), 1.0);
    EXPECT_EQ(CompiledBand(lower_only(p, {-1, -1}), {}).kind(), CompiledBand::Kind::LowerOnly);
    try {
        CompiledBand(upper_only(p, {-0.1, 1.0}), {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::StartOutsideBand);
    }
}

TEST(SeriesConfig, Validation) {
    EXPECT_THROW((SeriesConfig{0, 1e-12}.validate()), Error);
    EXPECT_THROW((SeriesConfig{6, -1.0}.validate()), Error);
    EXPECT_NO_THROW((SeriesConfig{6, 0.0}.validate()));
}
