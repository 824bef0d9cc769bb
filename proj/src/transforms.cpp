#include "bcp/transforms.hpp"

#include "bcp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace bcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kProbePoints = 256;

void require_positive(double v, const char* name) {
    require(std::isfinite(v) && v > 0.0, ErrorKind::InvalidArgument,
            std::string(name) + " must be positive and finite");
}

void require_finite(double v, const char* name) {
    require(std::isfinite(v), ErrorKind::InvalidArgument, std::string(name) + " must be finite");
}

double probe_time(double horizon, std::size_t k) {
    return horizon * static_cast<double>(k) / static_cast<double>(kProbePoints);
}

double probe_value(const GeneralBoundary& g, double t) {
    const double v = g(t);
    if (std::isnan(v)) {
        throw EvaluationError(t, "boundary evaluates to NaN at t = " + std::to_string(t));
    }
    return v;
}

// a < b on (0, T] and a(0) < x0 < b(0), checked on an equally spaced probe grid.
void check_ordering(const GeneralBoundary& a, const GeneralBoundary& b, double horizon,
                    double x0) {
    require(a.side() == BoundarySide::Lower && b.side() == BoundarySide::Upper,
            ErrorKind::InvalidBoundaries, "expected a lower and an upper boundary");
    require(std::isfinite(horizon) && horizon > 0.0, ErrorKind::InvalidArgument,
            "horizon must be positive");
    require(std::abs(a.horizon() - horizon) <= 1e-12 * std::max(1.0, horizon) &&
                std::abs(b.horizon() - horizon) <= 1e-12 * std::max(1.0, horizon),
            ErrorKind::InvalidArgument, "boundary horizons must match the problem horizon");
    require(a.is_finite() || b.is_finite(), ErrorKind::InvalidBoundaries,
            "both boundaries are infinite; the crossing probability is trivially 1");
    const double a0 = probe_value(a, 0.0);
    const double b0 = probe_value(b, 0.0);
    require(a0 < x0 && x0 < b0, ErrorKind::StartOutsideBand,
            "start value must lie strictly between a(0) and b(0)");
    for (std::size_t k = 1; k <= kProbePoints; ++k) {
        const double t = probe_time(horizon, k);
        require(probe_value(a, t) < probe_value(b, t), ErrorKind::InvalidBoundaries,
                "lower boundary must stay strictly below the upper boundary (t = " +
                    std::to_string(t) + ")");
    }
}

// Lower boundaries identically 0 (or -inf) on the positive half-line carry
// no constraint.
bool lower_is_vacuous(const GeneralBoundary& a) {
    return !a.is_finite() || a.constant_value() == 0.0;
}

void check_positive(const GeneralBoundary& g, double horizon) {
    if (!g.is_finite()) return;
    for (std::size_t k = 0; k <= kProbePoints; ++k) {
        const double t = probe_time(horizon, k);
        require(probe_value(g, t) > 0.0, ErrorKind::InvalidBoundaries,
                "boundary must be positive for a positive-valued process (t = " +
                    std::to_string(t) + ")");
    }
}

// Maps a boundary through y = transform(t(s), value(t(s))); infinite stays infinite.
template <typename Fn>
GeneralBoundary map_boundary(const GeneralBoundary& g, double reduced_horizon,
                             std::shared_ptr<const RealFunction> time_map, Fn transform,
                             bool vacuous = false) {
    if (!g.is_finite() || vacuous) return GeneralBoundary::infinite(g.side(), reduced_horizon);
    return GeneralBoundary(g.side(), reduced_horizon,
                           [g, time_map, transform](double s) {
                               const double t = (*time_map)(s);
                               return transform(s, t, g(t));
                           });
}

}  // namespace

Family family_of(const DiffusionSpec& spec) noexcept {
    return static_cast<Family>(spec.index());
}

ReducibilityClass reducibility_class(Family family) noexcept {
    switch (family) {
        case Family::OU:
        case Family::OuTimeVarying: return ReducibilityClass::L;
        case Family::Growth:
        case Family::GBM: return ReducibilityClass::G;
    }
    return ReducibilityClass::L;
}

const char* to_string(Family family) noexcept {
    switch (family) {
        case Family::OU: return "ou";
        case Family::OuTimeVarying: return "ou-td";
        case Family::Growth: return "growth";
        case Family::GBM: return "gbm";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------

ReducedProblem reduce_ou(const OuSpec& spec, const GeneralBoundary& a, const GeneralBoundary& b,
                         double horizon) {
    require_positive(spec.kappa, "kappa");
    require_positive(spec.sigma, "sigma");
    require_finite(spec.alpha, "alpha");
    require_finite(spec.x0, "x0");
    check_ordering(a, b, horizon, spec.x0);

    const double kappa = spec.kappa;
    const double var = spec.sigma * spec.sigma;
    const double S = var * std::expm1(2.0 * kappa * horizon) / (2.0 * kappa);
    auto time_map = std::make_shared<const RealFunction>([=](double s) {
        return std::min(horizon, std::log1p(2.0 * kappa * s / var) / (2.0 * kappa));
    });
    auto transform = [alpha = spec.alpha, x0 = spec.x0, kappa, var](double s, double,
                                                                     double v) {
        return alpha - x0 + (v - alpha) * std::sqrt(1.0 + 2.0 * kappa * s / var);
    };
    return {map_boundary(a, S, time_map, transform),
            map_boundary(b, S, time_map, transform),
            S,
            *time_map,
            [=](double t) { return var * std::expm1(2.0 * kappa * t) / (2.0 * kappa); },
            {Family::OU, a, b, horizon, spec.x0}};
}

ReducedProblem reduce_ou_td(const OuTimeVaryingSpec& spec, const GeneralBoundary& a,
                            const GeneralBoundary& b, double horizon) {
    require(spec.kappa.fn && spec.alpha.fn && spec.sigma.fn, ErrorKind::InvalidArgument,
            "time-varying OU needs kappa, alpha and sigma functions");
    require_finite(spec.x0, "x0");
    require(std::isfinite(horizon) && horizon > 0.0, ErrorKind::InvalidArgument,
            "horizon must be positive");
    for (std::size_t k = 0; k <= kProbePoints; ++k) {
        const double t = probe_time(horizon, k);
        require_positive(spec.kappa(t), "kappa(t)");
        require_positive(spec.sigma(t), "sigma(t)");
        require_finite(spec.alpha(t), "alpha(t)");
    }
    check_ordering(a, b, horizon, spec.x0);

    // K(t) = int kappa, s(t) = int exp(2K) sigma^2, Gamma(t) = int kappa e^K alpha.
    auto K = std::make_shared<const CumulativeIntegral>(spec.kappa.fn, horizon);
    auto clock = std::make_shared<const CumulativeIntegral>(
        [K, sigma = spec.sigma.fn](double u) {
            const double sg = sigma(u);
            return std::exp(2.0 * (*K)(u)) * sg * sg;
        },
        horizon);
    auto drift_integral = std::make_shared<const CumulativeIntegral>(
        [K, kappa = spec.kappa.fn, alpha = spec.alpha.fn](double u) {
            return kappa(u) * std::exp((*K)(u)) * alpha(u);
        },
        horizon);
    const double gamma0 = spec.alpha(0.0);
    // gamma solves gamma' = kappa (alpha - gamma), gamma(0) = alpha(0).
    auto gamma = [K, drift_integral, gamma0](double t) {
        return std::exp(-(*K)(t)) * (gamma0 + (*drift_integral)(t));
    };

    const double S = clock->total();
    auto time_map =
        std::make_shared<const RealFunction>([clock](double s) { return clock->inverse(s); });
    auto transform = [K, gamma, gamma0, x0 = spec.x0](double, double t, double v) {
        return gamma0 - x0 + (v - gamma(t)) * std::exp((*K)(t));
    };
    return {map_boundary(a, S, time_map, transform),
            map_boundary(b, S, time_map, transform),
            S,
            *time_map,
            [clock](double t) { return (*clock)(t); },
            {Family::OuTimeVarying, a, b, horizon, spec.x0}};
}

ReducedProblem reduce_growth(const GrowthSpec& spec, const GeneralBoundary& a,
                             const GeneralBoundary& b, double horizon) {
    require_positive(spec.alpha, "alpha");
    require_positive(spec.beta, "beta");
    require_positive(spec.sigma, "sigma");
    require_positive(spec.x0, "x0");
    check_ordering(a, b, horizon, spec.x0);
    const bool vacuous = lower_is_vacuous(a);
    require(!vacuous || b.is_finite(), ErrorKind::InvalidBoundaries,
            "upper boundary must be finite when the lower one is 0 (probability is trivially 1)");
    if (!vacuous) check_positive(a, horizon);
    check_positive(b, horizon);

    const double beta = spec.beta;
    const double sigma = spec.sigma;
    const double shift = (sigma * sigma - 2.0 * spec.alpha) / (2.0 * beta);
    const double start = (std::log(spec.x0) + shift) / sigma;
    const double S = std::expm1(2.0 * beta * horizon) / (2.0 * beta);
    auto time_map = std::make_shared<const RealFunction>([=](double s) {
        return std::min(horizon, std::log1p(2.0 * beta * s) / (2.0 * beta));
    });
    auto transform = [=](double s, double, double v) {
        return std::sqrt(1.0 + 2.0 * beta * s) / sigma * (std::log(v) + shift) - start;
    };
    return {map_boundary(a, S, time_map, transform, vacuous),
            map_boundary(b, S, time_map, transform),
            S,
            *time_map,
            [=](double t) { return std::expm1(2.0 * beta * t) / (2.0 * beta); },
            {Family::Growth, a, b, horizon, spec.x0}};
}

ReducedProblem reduce_gbm(const GbmSpec& spec, const GeneralBoundary& a,
                          const GeneralBoundary& b, double horizon) {
    require_positive(spec.sigma, "sigma");
    require_positive(spec.x0, "x0");
    require(static_cast<bool>(spec.rate.fn), ErrorKind::InvalidArgument,
            "GBM needs a rate function");
    check_ordering(a, b, horizon, spec.x0);
    const bool vacuous = lower_is_vacuous(a);
    require(!vacuous || b.is_finite(), ErrorKind::InvalidBoundaries,
            "upper boundary must be finite when the lower one is 0 (probability is trivially 1)");
    if (!vacuous) check_positive(a, horizon);
    check_positive(b, horizon);

    RealFunction cumulative_rate;
    if (spec.rate.constant) {
        const double r = *spec.rate.constant;
        require_finite(r, "rate");
        cumulative_rate = [r](double t) { return r * t; };
    } else {
        auto R = std::make_shared<const CumulativeIntegral>(spec.rate.fn, horizon);
        cumulative_rate = [R](double t) { return (*R)(t); };
    }
    const double sigma = spec.sigma;
    const double x0 = spec.x0;
    auto time_map = std::make_shared<const RealFunction>([](double s) { return s; });
    auto transform = [=](double, double t, double v) {
        return (std::log(v / x0) + 0.5 * sigma * sigma * t - cumulative_rate(t)) / sigma;
    };
    return {map_boundary(a, horizon, time_map, transform, vacuous),
            map_boundary(b, horizon, time_map, transform),
            horizon,
            *time_map,
            [](double t) { return t; },
            {Family::GBM, a, b, horizon, spec.x0}};
}

ReducedProblem reduce(const DiffusionSpec& spec, const GeneralBoundary& a,
                      const GeneralBoundary& b, double horizon) {
    return std::visit(
        [&](const auto& s) -> ReducedProblem {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, OuSpec>) return reduce_ou(s, a, b, horizon);
            else if constexpr (std::is_same_v<T, OuTimeVaryingSpec>)
                return reduce_ou_td(s, a, b, horizon);
            else if constexpr (std::is_same_v<T, GrowthSpec>)
                return reduce_growth(s, a, b, horizon);
            else return reduce_gbm(s, a, b, horizon);
        },
        spec);
}

// ---------------------------------------------------------------------------

ReducibilityCheck check_reducibility(const CoefficientFunction& mu,
                                     const CoefficientFunction& sigma,
                                     const ReducibilityGrid& grid) {
    require(grid.t_points >= 1 && grid.x_points >= 1, ErrorKind::InvalidArgument,
            "grid needs at least one point per axis");
    require(grid.t_step > 0.0 && grid.x_step > 0.0, ErrorKind::InvalidArgument,
            "finite-difference steps must be positive");
    require(grid.t_max >= grid.t_min && grid.x_max >= grid.x_min, ErrorKind::InvalidArgument,
            "grid bounds are reversed");
    const double ht = grid.t_step;
    const double hx = grid.x_step;

    auto sig = [&](double t, double x) {
        const double v = sigma(t, x);
        require(v > 0.0, ErrorKind::InvalidDomain,
                "diffusion coefficient must be positive on the grid (t = " + std::to_string(t) +
                    ", x = " + std::to_string(x) + ")");
        return v;
    };
    auto inner = [&](double t, double x) {
        const double sx = (sig(t, x + hx) - sig(t, x - hx)) / (2.0 * hx);
        return 0.5 * sx - mu(t, x) / sig(t, x);
    };
    auto bracketed = [&](double t, double x) {
        const double st = (sig(t + ht, x) - sig(t - ht, x)) / (2.0 * ht);
        const double dx_inner = (inner(t, x + hx) - inner(t, x - hx)) / (2.0 * hx);
        return st / sig(t, x) + sig(t, x) * dx_inner;
    };

    double max_residual = 0.0;
    double max_term = 0.0;
    auto axis = [](double lo, double hi, std::size_t n, std::size_t k) {
        return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    };
    for (std::size_t i = 0; i < grid.t_points; ++i) {
        const double t = axis(grid.t_min, grid.t_max, grid.t_points, i);
        for (std::size_t j = 0; j < grid.x_points; ++j) {
            const double x = axis(grid.x_min, grid.x_max, grid.x_points, j);
            const double fp = bracketed(t, x + hx);
            const double fm = bracketed(t, x - hx);
            const double residual = (fp - fm) / (2.0 * hx);
            require(std::isfinite(residual), ErrorKind::InvalidDomain,
                    "residual is not finite at t = " + std::to_string(t) +
                        ", x = " + std::to_string(x));
            max_residual = std::max(max_residual, std::abs(residual));
            max_term = std::max({max_term, std::abs(fp), std::abs(fm)});
        }
    }
    const double scale = std::max(1.0, max_term);
    return {max_residual, scale, max_residual <= grid.rel_tolerance * scale};
}

}  // namespace bcp
