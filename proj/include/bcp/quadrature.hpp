#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bcp {

using RealFunction = std::function<double(double)>;

struct SimpsonOptions {
    double abs_tolerance = 1e-10;
    int max_depth = 48;
};

/// Adaptive Simpson with Richardson correction. Throws NumericFailure if a
/// subinterval exhausts max_depth without meeting its share of the tolerance.
double adaptive_simpson(const RealFunction& f, double a, double b, SimpsonOptions opts = {});

/// Solves f(t) = target for t in [lo, hi] where f is strictly increasing.
/// Bracketed TOMS 748 iteration to a relative tolerance of about 1e-12.
double invert_increasing(const RealFunction& f, double target, double lo, double hi);

/// Running integral F(t) = int_0^t f(u) du on [0, T], tabulated at equally
/// spaced cells so that each evaluation only integrates within one cell.
class CumulativeIntegral {
public:
    CumulativeIntegral(RealFunction integrand, double horizon, std::size_t cells = 64,
                       double abs_tolerance = 1e-10);

    double operator()(double t) const;
    double horizon() const noexcept { return horizon_; }
    double total() const noexcept { return table_.back(); }

    /// Inverse of an increasing integral (positive integrand).
    double inverse(double value) const;

private:
    RealFunction integrand_;
    double horizon_;
    double cell_width_;
    SimpsonOptions opts_;
    std::vector<double> table_;
};

}  // namespace bcp
