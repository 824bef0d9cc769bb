#pragma once

#include <string_view>
#include <vector>

namespace bcp {

/// Closed-form one-sided crossing probabilities for boundaries that the
/// reductions map to straight lines (or constants).
///
///   ou_exp_up       OU,     b(t) = alpha + h e^{kappa t}
///   ou_exp_down     OU,     b(t) = alpha + h e^{-kappa t}
///   growth_exp_up   growth, b(t) = exp(h e^{beta t} - (sigma^2 - 2 alpha) / (2 beta)), a = 0
///   growth_exp_down growth, b(t) = exp(h e^{-beta t} - (sigma^2 - 2 alpha) / (2 beta)), a = 0
///   gbm_exp_drift   GBM,    b(t) = exp(p t + q + R(t)), a = 0
///   gbm_const_rate_const_barrier  GBM with r(t) = r, b = h, a = 0
///   bm_linear       BM,     b(t) = intercept + slope t
enum class CatalogCase {
    OuExpUp,
    OuExpDown,
    GrowthExpUp,
    GrowthExpDown,
    GbmExpDrift,
    GbmConstRateConstBarrier,
    BmLinear,
};

/// Union of the parameters the catalog formulas use; each case reads only
/// its own fields.
struct CatalogParams {
    double horizon = 1.0;
    double x0 = 0.0;
    double kappa = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double sigma = 1.0;
    double h = 0.0;
    double p = 0.0;
    double q = 0.0;
    double rate = 0.0;
    double intercept = 0.0;
    double slope = 0.0;
};

CatalogCase parse_catalog_case(std::string_view id);
std::string_view to_string(CatalogCase c) noexcept;
const std::vector<CatalogCase>& all_catalog_cases();

double closed_form_bcp(CatalogCase c, const CatalogParams& params);
double closed_form_bcp(std::string_view id, const CatalogParams& params);

}  // namespace bcp
