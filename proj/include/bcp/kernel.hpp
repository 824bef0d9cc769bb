#pragma once

#include "bcp/boundary.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace bcp {

/// Truncation policy for the two-sided series.
///
/// With tail_tolerance > 0 the series stops at the first term whose magnitude
/// falls below the tolerance; if that has not happened by max_terms the sum
/// keeps going up to kSeriesHardCap terms and the cap hit is reported. With
/// tail_tolerance == 0 exactly max_terms terms are summed.
struct SeriesConfig {
    std::size_t max_terms = 6;
    double tail_tolerance = 1e-12;

    void validate() const;
};

inline constexpr std::size_t kSeriesHardCap = 64;

struct SeriesDiagnostics {
    bool cap_hit = false;
    std::size_t most_terms = 0;
};

/// Brownian values x_1..x_n at partition nodes t_1..t_n (x_0 = 0 implicit).
using NodeSamples = std::span<const double>;

/// Standard normal distribution function.
double normal_cdf(double z);
/// log of normal_cdf, accurate far into the lower tail.
double log_normal_cdf(double z);

/// Conditional non-crossing probability for an upper boundary only.
/// The band's lower boundary must be -inf and the start (0) below b(0).
double g_one_sided(const PiecewiseLinearBand& band, NodeSamples x);

/// j-th series term of interval i (i = 1..n) for the two-sided kernel, using
/// the interval's own endpoint values (right limit at t_{i-1}, left at t_i).
double h_term(std::size_t i, std::size_t j, double x_prev, double x_cur,
              const PiecewiseLinearBand& band);

/// Conditional non-crossing probability for a finite two-sided band.
double g_two_sided(const PiecewiseLinearBand& band, NodeSamples x, const SeriesConfig& cfg = {},
                   SeriesDiagnostics* diag = nullptr);

/// Dispatches on which sides are finite: one-sided, reflected one-sided,
/// two-sided, or identically 1 when both sides are infinite.
double crossing_kernel(const PiecewiseLinearBand& band, NodeSamples x,
                       const SeriesConfig& cfg = {}, SeriesDiagnostics* diag = nullptr);

/// P(W_t < intercept + slope * t for all t <= horizon).
double bcp_linear_one_sided(double intercept, double slope, double horizon);

/// Band pre-digested into flat per-interval arrays for repeated evaluation.
class CompiledBand {
public:
    enum class Kind { Unbounded, UpperOnly, LowerOnly, TwoSided };

    CompiledBand(const PiecewiseLinearBand& band, const SeriesConfig& cfg);

    Kind kind() const noexcept { return kind_; }
    std::size_t intervals() const noexcept { return segments_.size(); }

    double operator()(NodeSamples x, SeriesDiagnostics* diag = nullptr) const;

private:
    struct Segment {
        double two_over_dt;
        double lower_prev, lower_cur;  // interval-side values
        double upper_prev, upper_cur;
        double lower_bind, upper_bind;  // indicator values at the right node
    };

    double one_sided(NodeSamples x, double sign) const;
    double two_sided(NodeSamples x, SeriesDiagnostics* diag) const;

    Kind kind_;
    SeriesConfig cfg_;
    std::vector<Segment> segments_;
};

}  // namespace bcp
