#include "bcp/kernel.hpp"

#include "bcp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bcp {

namespace {

// exp(-y), flushed to zero once the argument is below the double range.
inline double exp_neg(double y) { return y > 745.0 ? 0.0 : std::exp(-y); }

struct IntervalValues {
    double two_over_dt;
    double alpha_prev, alpha_cur;
    double beta_prev, beta_cur;
};

inline double series_term(double j, const IntervalValues& v, double x_prev, double x_cur) {
    const double dp = v.beta_prev - v.alpha_prev;
    const double dc = v.beta_cur - v.alpha_cur;
    const double up = v.alpha_prev - x_prev;
    const double uc = v.alpha_cur - x_cur;
    const double wp = v.beta_prev - x_prev;
    const double wc = v.beta_cur - x_cur;
    const double k = v.two_over_dt;
    const double jdd = j * dp * dc;
    return exp_neg(k * (j * dp + up) * (j * dc + uc)) -
           exp_neg(k * j * (jdd + dp * uc - dc * up)) +
           exp_neg(k * (j * dp - wp) * (j * dc - wc)) -
           exp_neg(k * j * (jdd - dp * wc + dc * wp));
}

// 1 - sum_j h_j under the truncation policy, clamped to [0, 1].
inline double series_factor(const IntervalValues& v, double x_prev, double x_cur,
                            const SeriesConfig& cfg, SeriesDiagnostics* diag) {
    double sum = 0.0;
    std::size_t j = 1;
    bool cap_hit = false;
    for (;; ++j) {
        const double h = series_term(static_cast<double>(j), v, x_prev, x_cur);
        sum += h;
        if (cfg.tail_tolerance > 0.0) {
            if (std::abs(h) < cfg.tail_tolerance) break;
            if (j >= kSeriesHardCap) {
                cap_hit = true;
                break;
            }
        } else if (j >= cfg.max_terms) {
            break;
        }
    }
    if (diag) {
        diag->cap_hit = diag->cap_hit || cap_hit;
        diag->most_terms = std::max(diag->most_terms, j);
    }
    return std::clamp(1.0 - sum, 0.0, 1.0);
}

void require_samples(const PiecewiseLinearBand& band, NodeSamples x) {
    require(x.size() == band.partition().intervals(), ErrorKind::InvalidArgument,
            "expected " + std::to_string(band.partition().intervals()) + " node samples, got " +
                std::to_string(x.size()));
}

}  // namespace

void SeriesConfig::validate() const {
    require(max_terms >= 1, ErrorKind::InvalidArgument, "series needs at least one term");
    require(tail_tolerance >= 0.0 && std::isfinite(tail_tolerance), ErrorKind::InvalidArgument,
            "series tail tolerance must be finite and non-negative");
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double log_normal_cdf(double z) {
    if (z > -30.0) return std::log(normal_cdf(z));
    // Asymptotic expansion of the Mills ratio.
    const double z2 = z * z;
    const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
    return -0.5 * z2 - std::log(-z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

// ---------------------------------------------------------------------------

CompiledBand::CompiledBand(const PiecewiseLinearBand& band, const SeriesConfig& cfg)
    : cfg_(cfg) {
    cfg_.validate();
    require(band.contains_start(0.0), ErrorKind::StartOutsideBand,
            "start point 0 is not strictly inside the band at t = 0");
    const auto& lo = band.lower();
    const auto& up = band.upper();
    if (lo.is_infinite() && up.is_infinite()) {
        kind_ = Kind::Unbounded;
    } else if (lo.is_infinite()) {
        kind_ = Kind::UpperOnly;
    } else if (up.is_infinite()) {
        kind_ = Kind::LowerOnly;
    } else {
        kind_ = Kind::TwoSided;
    }
    const auto& p = band.partition();
    const std::size_t n = p.intervals();
    segments_.resize(n);
    for (std::size_t i = 1; i <= n; ++i) {
        Segment& s = segments_[i - 1];
        s.two_over_dt = 2.0 / p.gap(i);
        s.lower_prev = lo.right_value(i - 1);
        s.lower_cur = lo.left_value(i);
        s.upper_prev = up.right_value(i - 1);
        s.upper_cur = up.left_value(i);
        s.lower_bind = lo.binding_value(i);
        s.upper_bind = up.binding_value(i);
        if (kind_ == Kind::LowerOnly) {
            // Reflect x -> -x so the finite lower side becomes an upper side.
            s.upper_prev = -s.lower_prev;
            s.upper_cur = -s.lower_cur;
            s.upper_bind = -s.lower_bind;
        }
    }
}

double CompiledBand::operator()(NodeSamples x, SeriesDiagnostics* diag) const {
    switch (kind_) {
        case Kind::Unbounded: return 1.0;
        case Kind::UpperOnly: return one_sided(x, 1.0);
        case Kind::LowerOnly: return one_sided(x, -1.0);
        case Kind::TwoSided: return two_sided(x, diag);
    }
    return 0.0;
}

double CompiledBand::one_sided(NodeSamples x, double sign) const {
    double g = 1.0;
    double x_prev = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        const double xi = sign * x[i];
        if (!(xi < s.upper_bind)) return 0.0;
        const double y = s.two_over_dt * (s.upper_prev - x_prev) * (s.upper_cur - xi);
        if (y <= 745.0) g *= -std::expm1(-y);
        x_prev = xi;
    }
    return g;
}

double CompiledBand::two_sided(NodeSamples x, SeriesDiagnostics* diag) const {
    double g = 1.0;
    double x_prev = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        const double xi = x[i];
        if (!(s.lower_bind < xi && xi < s.upper_bind)) return 0.0;
        const IntervalValues v{s.two_over_dt, s.lower_prev, s.lower_cur, s.upper_prev,
                               s.upper_cur};
        g *= series_factor(v, x_prev, xi, cfg_, diag);
        if (g == 0.0) return 0.0;
        x_prev = xi;
    }
    return g;
}

// ---------------------------------------------------------------------------

double g_one_sided(const PiecewiseLinearBand& band, NodeSamples x) {
    require(band.lower().is_infinite(), ErrorKind::InvalidArgument,
            "one-sided kernel needs an infinite lower boundary");
    require(!band.upper().is_infinite(), ErrorKind::InvalidArgument,
            "one-sided kernel needs a finite upper boundary");
    require_samples(band, x);
    return CompiledBand(band, SeriesConfig{})(x);
}

double h_term(std::size_t i, std::size_t j, double x_prev, double x_cur,
              const PiecewiseLinearBand& band) {
    const auto& p = band.partition();
    require(i >= 1 && i <= p.intervals(), ErrorKind::InvalidArgument,
            "interval index out of range");
    require(j >= 1, ErrorKind::InvalidArgument, "series index starts at 1");
    require(!band.lower().is_infinite() && !band.upper().is_infinite(),
            ErrorKind::InvalidArgument, "series term needs finite band values");
    const IntervalValues v{2.0 / p.gap(i), band.lower().right_value(i - 1),
                           band.lower().left_value(i), band.upper().right_value(i - 1),
                           band.upper().left_value(i)};
    return series_term(static_cast<double>(j), v, x_prev, x_cur);
}

double g_two_sided(const PiecewiseLinearBand& band, NodeSamples x, const SeriesConfig& cfg,
                   SeriesDiagnostics* diag) {
    require(!band.lower().is_infinite() && !band.upper().is_infinite(),
            ErrorKind::InvalidArgument, "two-sided kernel needs finite boundaries");
    require_samples(band, x);
    return CompiledBand(band, cfg)(x, diag);
}

double crossing_kernel(const PiecewiseLinearBand& band, NodeSamples x, const SeriesConfig& cfg,
                       SeriesDiagnostics* diag) {
    require_samples(band, x);
    return CompiledBand(band, cfg)(x, diag);
}

double bcp_linear_one_sided(double intercept, double slope, double horizon) {
    require(std::isfinite(horizon) && horizon > 0.0, ErrorKind::InvalidArgument,
            "horizon must be positive");
    require(!std::isnan(intercept) && !std::isnan(slope), ErrorKind::InvalidArgument,
            "linear boundary parameters must not be NaN");
    require(intercept > 0.0, ErrorKind::StartOutsideBand,
            "linear boundary intercept must be positive (start below the boundary)");
    const double root_t = std::sqrt(horizon);
    const double first = normal_cdf((intercept + slope * horizon) / root_t);
    const double log_second =
        -2.0 * intercept * slope + log_normal_cdf((slope * horizon - intercept) / root_t);
    const double second = std::isnan(log_second) ? 0.0 : std::exp(log_second);
    return std::clamp(first - second, 0.0, 1.0);
}

}  // namespace bcp
