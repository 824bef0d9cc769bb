#include "bcp/quadrature.hpp"

#include "bcp/error.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace bcp {

namespace {

struct SimpsonState {
    const RealFunction& f;
    int max_depth;
    bool exhausted = false;
    double worst_a = 0.0;
    double worst_b = 0.0;
};

double simpson_step(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.f(lm);
    const double frm = st.f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= st.max_depth) {
        if (!st.exhausted) {
            st.worst_a = a;
            st.worst_b = b;
        }
        st.exhausted = true;
        return left + right + delta / 15.0;
    }
    return simpson_step(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_step(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_simpson(const RealFunction& f, double a, double b, SimpsonOptions opts) {
    if (a == b) return 0.0;
    require(std::isfinite(a) && std::isfinite(b), ErrorKind::InvalidArgument,
            "integration limits must be finite");
    require(opts.abs_tolerance > 0.0, ErrorKind::InvalidArgument,
            "quadrature tolerance must be positive");
    SimpsonState st{f, opts.max_depth};
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double value = simpson_step(st, a, b, fa, fm, fb, whole, opts.abs_tolerance, 0);
    if (st.exhausted || !std::isfinite(value)) {
        std::ostringstream os;
        os.precision(12);
        os << "adaptive Simpson did not converge on [" << a << ", " << b
           << "] (tolerance " << opts.abs_tolerance << ", depth cap " << opts.max_depth
           << ", first unresolved cell [" << st.worst_a << ", " << st.worst_b
           << "], estimate " << value << ")";
        fail(ErrorKind::NumericFailure, os.str());
    }
    return value;
}

double invert_increasing(const RealFunction& f, double target, double lo, double hi) {
    auto g = [&](double t) { return f(t) - target; };
    const double glo = g(lo);
    const double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    require(glo < 0.0 && ghi > 0.0, ErrorKind::NumericFailure,
            "inverse target is not bracketed by the search interval");
    std::uintmax_t iterations = 200;
    const auto r = boost::math::tools::toms748_solve(
        g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<double>(42), iterations);
    require(iterations < 200, ErrorKind::NumericFailure, "monotone inversion did not converge");
    return 0.5 * (r.first + r.second);
}

CumulativeIntegral::CumulativeIntegral(RealFunction integrand, double horizon,
                                       std::size_t cells, double abs_tolerance)
    : integrand_(std::move(integrand)),
      horizon_(horizon),
      cell_width_(horizon / static_cast<double>(cells)),
      opts_{abs_tolerance / static_cast<double>(cells)} {
    require(std::isfinite(horizon) && horizon > 0.0, ErrorKind::InvalidArgument,
            "integration horizon must be positive");
    require(cells >= 1, ErrorKind::InvalidArgument, "need at least one cell");
    table_.resize(cells + 1, 0.0);
    for (std::size_t k = 0; k < cells; ++k) {
        const double a = cell_width_ * static_cast<double>(k);
        const double b = k + 1 == cells ? horizon_ : cell_width_ * static_cast<double>(k + 1);
        table_[k + 1] = table_[k] + adaptive_simpson(integrand_, a, b, opts_);
    }
}

double CumulativeIntegral::operator()(double t) const {
    if (t <= 0.0) return 0.0;
    const std::size_t cells = table_.size() - 1;
    if (t >= horizon_) {
        return t == horizon_ ? table_.back()
                             : table_.back() + adaptive_simpson(integrand_, horizon_, t, opts_);
    }
    const auto k = std::min(cells - 1, static_cast<std::size_t>(t / cell_width_));
    const double a = cell_width_ * static_cast<double>(k);
    return table_[k] + adaptive_simpson(integrand_, a, t, opts_);
}

double CumulativeIntegral::inverse(double value) const {
    if (value <= 0.0) return 0.0;
    if (value >= table_.back()) return horizon_;
    const auto it = std::upper_bound(table_.begin(), table_.end(), value);
    const auto k = static_cast<std::size_t>(it - table_.begin()) - 1;
    const double a = cell_width_ * static_cast<double>(k);
    const double b = k + 2 == table_.size() ? horizon_ : cell_width_ * static_cast<double>(k + 1);
    return invert_increasing([this](double t) { return (*this)(t); }, value, a, b);
}

}  // namespace bcp
