#include "bcp/catalog.hpp"

#include "bcp/error.hpp"
#include "bcp/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

namespace bcp {

namespace {

constexpr std::array<std::pair<CatalogCase, std::string_view>, 7> kNames{{
    {CatalogCase::OuExpUp, "ou_exp_up"},
    {CatalogCase::OuExpDown, "ou_exp_down"},
    {CatalogCase::GrowthExpUp, "growth_exp_up"},
    {CatalogCase::GrowthExpDown, "growth_exp_down"},
    {CatalogCase::GbmExpDrift, "gbm_exp_drift"},
    {CatalogCase::GbmConstRateConstBarrier, "gbm_const_rate_const_barrier"},
    {CatalogCase::BmLinear, "bm_linear"},
}};

void positive(double v, const char* name) {
    require(std::isfinite(v) && v > 0.0, ErrorKind::InvalidArgument,
            std::string(name) + " must be positive");
}

// Phi(first) - exp(exponent) Phi(second), with the product formed in log space.
double phi_difference(double first, double exponent, double second) {
    const double log_tail = exponent + log_normal_cdf(second);
    const double tail = std::isnan(log_tail) ? 0.0 : std::exp(log_tail);
    return std::clamp(normal_cdf(first) - tail, 0.0, 1.0);
}

// Start-point check on the reduced boundary's value at 0. A start exactly on
// the boundary crosses immediately.
bool starts_on_boundary(double reduced_intercept) {
    require(reduced_intercept >= 0.0, ErrorKind::StartOutsideBand,
            "boundary starts below the initial value");
    return reduced_intercept == 0.0;
}

double ou_exp_up(const CatalogParams& c) {
    positive(c.kappa, "kappa");
    positive(c.sigma, "sigma");
    positive(c.horizon, "horizon");
    if (starts_on_boundary(c.alpha - c.x0 + c.h)) return 0.0;
    const double e = std::exp(2.0 * c.kappa * c.horizon);
    const double denom = c.sigma * std::sqrt((e - 1.0) / (2.0 * c.kappa));
    return phi_difference((c.h * e + c.alpha - c.x0) / denom,
                          -4.0 * c.h * c.kappa * (c.h + c.alpha - c.x0) / (c.sigma * c.sigma),
                          (c.h * e - c.alpha + c.x0 - 2.0 * c.h) / denom);
}

double ou_exp_down(const CatalogParams& c) {
    positive(c.kappa, "kappa");
    positive(c.sigma, "sigma");
    positive(c.horizon, "horizon");
    if (starts_on_boundary(c.alpha - c.x0 + c.h)) return 0.0;
    const double e = std::exp(2.0 * c.kappa * c.horizon);
    const double denom = c.sigma * std::sqrt((e - 1.0) / (2.0 * c.kappa));
    return std::clamp(2.0 * normal_cdf((c.alpha - c.x0 + c.h) / denom) - 1.0, 0.0, 1.0);
}

double growth_shift(const CatalogParams& c) {
    return (c.sigma * c.sigma - 2.0 * c.alpha) / (2.0 * c.beta);
}

void growth_domain(const CatalogParams& c) {
    positive(c.alpha, "alpha");
    positive(c.beta, "beta");
    positive(c.sigma, "sigma");
    positive(c.x0, "x0");
    positive(c.horizon, "horizon");
}

double growth_exp_up(const CatalogParams& c) {
    growth_domain(c);
    if (starts_on_boundary((c.h - std::log(c.x0) - growth_shift(c)) / c.sigma)) return 0.0;
    const double e = std::exp(2.0 * c.beta * c.horizon);
    const double lx = std::log(c.x0);
    const double s2 = c.sigma * c.sigma;
    const double denom = c.sigma * std::sqrt(2.0 * c.beta * (e - 1.0));
    return phi_difference(
        (2.0 * c.beta * (c.h * e - lx) - s2 + 2.0 * c.alpha) / denom,
        (4.0 * c.h * c.beta * (lx - c.h) + 2.0 * c.h * (s2 - 2.0 * c.alpha)) / s2,
        (2.0 * c.beta * (c.h * e - 2.0 * c.h + lx) + s2 - 2.0 * c.alpha) / denom);
}

double growth_exp_down(const CatalogParams& c) {
    growth_domain(c);
    if (starts_on_boundary((c.h - std::log(c.x0) - growth_shift(c)) / c.sigma)) return 0.0;
    const double e = std::exp(2.0 * c.beta * c.horizon);
    const double denom = c.sigma * std::sqrt(2.0 * c.beta * (e - 1.0));
    const double arg =
        (2.0 * c.beta * (c.h - std::log(c.x0)) - c.sigma * c.sigma + 2.0 * c.alpha) / denom;
    return std::clamp(2.0 * normal_cdf(arg) - 1.0, 0.0, 1.0);
}

double gbm_exp_drift(const CatalogParams& c) {
    positive(c.sigma, "sigma");
    positive(c.x0, "x0");
    positive(c.horizon, "horizon");
    const double lx = std::log(c.x0);
    if (starts_on_boundary((c.q - lx) / c.sigma)) return 0.0;
    const double s2 = c.sigma * c.sigma;
    const double drift = (c.p + 0.5 * s2) * c.horizon;
    const double denom = c.sigma * std::sqrt(c.horizon);
    return phi_difference((drift + c.q - lx) / denom, (2.0 * c.p + s2) * (lx - c.q) / s2,
                          (drift - c.q + lx) / denom);
}

double gbm_const_rate_const_barrier(const CatalogParams& c) {
    positive(c.sigma, "sigma");
    positive(c.x0, "x0");
    positive(c.h, "h");
    positive(c.horizon, "horizon");
    const double lh = std::log(c.h / c.x0);
    if (starts_on_boundary(lh / c.sigma)) return 0.0;
    const double s2 = c.sigma * c.sigma;
    const double drift = (0.5 * s2 - c.rate) * c.horizon;
    const double denom = c.sigma * std::sqrt(c.horizon);
    return phi_difference((drift + lh) / denom, (2.0 * c.rate - s2) * lh / s2,
                          (drift - lh) / denom);
}

}  // namespace

CatalogCase parse_catalog_case(std::string_view id) {
    for (const auto& [c, name] : kNames) {
        if (name == id) return c;
    }
    fail(ErrorKind::InvalidArgument, "unknown catalog case '" + std::string(id) + "'");
}

std::string_view to_string(CatalogCase c) noexcept {
    for (const auto& [k, name] : kNames) {
        if (k == c) return name;
    }
    return "unknown";
}

const std::vector<CatalogCase>& all_catalog_cases() {
    static const std::vector<CatalogCase> cases = [] {
        std::vector<CatalogCase> v;
        for (const auto& entry : kNames) v.push_back(entry.first);
        return v;
    }();
    return cases;
}

double closed_form_bcp(CatalogCase c, const CatalogParams& params) {
    switch (c) {
        case CatalogCase::OuExpUp: return ou_exp_up(params);
        case CatalogCase::OuExpDown: return ou_exp_down(params);
        case CatalogCase::GrowthExpUp: return growth_exp_up(params);
        case CatalogCase::GrowthExpDown: return growth_exp_down(params);
        case CatalogCase::GbmExpDrift: return gbm_exp_drift(params);
        case CatalogCase::GbmConstRateConstBarrier: return gbm_const_rate_const_barrier(params);
        case CatalogCase::BmLinear:
            return bcp_linear_one_sided(params.intercept, params.slope, params.horizon);
    }
    fail(ErrorKind::InvalidArgument, "unknown catalog case");
}

double closed_form_bcp(std::string_view id, const CatalogParams& params) {
    return closed_form_bcp(parse_catalog_case(id), params);
}

}  // namespace bcp
