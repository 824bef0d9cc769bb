#pragma once

#include "bcp/boundary.hpp"
#include "bcp/quadrature.hpp"

#include <functional>
#include <optional>
#include <variant>

namespace bcp {

/// Deterministic coefficient of time. `constant` is set when the function is
/// known to be constant so reductions can use closed forms.
struct TimeFunction {
    RealFunction fn;
    std::optional<double> constant;

    static TimeFunction of_constant(double v) {
        return {[v](double) { return v; }, v};
    }
    double operator()(double t) const { return fn(t); }
};

/// dX = kappa (alpha - X) dt + sigma dW
struct OuSpec {
    double kappa;
    double alpha;
    double sigma;
    double x0;
};

/// dX = kappa(t) (alpha(t) - X) dt + sigma(t) dW
struct OuTimeVaryingSpec {
    TimeFunction kappa;
    TimeFunction alpha;
    TimeFunction sigma;
    double x0;
};

/// dX = (alpha X - beta X log X) dt + sigma X dW on the positive reals
struct GrowthSpec {
    double alpha;
    double beta;
    double sigma;
    double x0;
};

/// dX = r(t) X dt + sigma X dW on the positive reals
struct GbmSpec {
    double sigma;
    TimeFunction rate;
    double x0;
};

using DiffusionSpec = std::variant<OuSpec, OuTimeVaryingSpec, GrowthSpec, GbmSpec>;

enum class Family { OU, OuTimeVarying, Growth, GBM };

/// Diffusion classes solving the reducibility equation: sigma independent of
/// x with affine drift (L), or sigma proportional to x with drift
/// alpha(t) x + beta(t) x log x (G).
enum class ReducibilityClass { L, G };

Family family_of(const DiffusionSpec& spec) noexcept;
ReducibilityClass reducibility_class(Family family) noexcept;
const char* to_string(Family family) noexcept;

/// Brownian-motion problem equivalent to a diffusion crossing problem: the
/// diffusion stays in (a, b) on [0, T] iff a standard BM stays in (c, d) on
/// [0, S] under the time change s(t).
struct ReducedProblem {
    GeneralBoundary lower;  ///< c(s)
    GeneralBoundary upper;  ///< d(s)
    double horizon;         ///< S
    RealFunction time_map;  ///< s -> t(s)
    RealFunction clock;     ///< t -> s(t)

    struct Provenance {
        Family family;
        GeneralBoundary lower;
        GeneralBoundary upper;
        double horizon;
        double x0;
    };
    Provenance source;
};

ReducedProblem reduce_ou(const OuSpec& spec, const GeneralBoundary& a, const GeneralBoundary& b,
                         double horizon);
ReducedProblem reduce_ou_td(const OuTimeVaryingSpec& spec, const GeneralBoundary& a,
                            const GeneralBoundary& b, double horizon);
ReducedProblem reduce_growth(const GrowthSpec& spec, const GeneralBoundary& a,
                             const GeneralBoundary& b, double horizon);
ReducedProblem reduce_gbm(const GbmSpec& spec, const GeneralBoundary& a,
                          const GeneralBoundary& b, double horizon);
ReducedProblem reduce(const DiffusionSpec& spec, const GeneralBoundary& a,
                      const GeneralBoundary& b, double horizon);

using CoefficientFunction = std::function<double(double t, double x)>;

struct ReducibilityGrid {
    double t_min = 0.0;
    double t_max = 1.0;
    double x_min = -1.0;
    double x_max = 1.0;
    std::size_t t_points = 11;
    std::size_t x_points = 11;
    double t_step = 1e-3;  ///< finite-difference step in t
    double x_step = 1e-3;  ///< finite-difference step in x
    double rel_tolerance = 1e-4;
};

struct ReducibilityCheck {
    double max_residual;
    double scale;  ///< max(1, max |bracketed term|) over the grid
    bool reducible;
};

/// Evaluates d/dx [ sigma_t / sigma + sigma d/dx (sigma_x / 2 - mu / sigma) ]
/// by nested central differences over the grid. The process is judged
/// reducible when the largest |residual| is within rel_tolerance * scale.
ReducibilityCheck check_reducibility(const CoefficientFunction& mu,
                                     const CoefficientFunction& sigma,
                                     const ReducibilityGrid& grid);

}  // namespace bcp
