#include "bcp/boundary.hpp"

#include "bcp/error.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace bcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double infinity_for(BoundarySide side) { return side == BoundarySide::Lower ? -kInf : kInf; }

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::ParseError: return "parse-error";
        case ErrorKind::StartOutsideBand: return "start-outside-band";
        case ErrorKind::InvalidBoundaries: return "invalid-boundaries";
        case ErrorKind::EvaluationError: return "evaluation-error";
        case ErrorKind::NumericFailure: return "numeric-failure";
        case ErrorKind::InvalidDomain: return "invalid-domain";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    require(nodes_.size() >= 2, ErrorKind::InvalidArgument,
            "partition needs at least two nodes");
    require(nodes_.front() == 0.0, ErrorKind::InvalidArgument, "partition must start at 0");
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        require(std::isfinite(nodes_[i]) && nodes_[i] > nodes_[i - 1],
                ErrorKind::InvalidArgument,
                "partition nodes must be finite and strictly increasing (node " +
                    std::to_string(i) + ")");
    }
}

double Partition::gap(std::size_t i) const {
    require(i >= 1 && i < nodes_.size(), ErrorKind::InvalidArgument,
            "interval index out of range");
    return nodes_[i] - nodes_[i - 1];
}

Partition uniform_partition(double horizon, std::size_t n) {
    require(std::isfinite(horizon) && horizon > 0.0, ErrorKind::InvalidArgument,
            "horizon must be positive, got " + fmt(horizon));
    require(n >= 1, ErrorKind::InvalidArgument, "partition size must be at least 1");
    std::vector<double> nodes(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i] = static_cast<double>(i) * horizon / static_cast<double>(n);
    }
    nodes[n] = horizon;
    return Partition(std::move(nodes));
}

// ---------------------------------------------------------------------------
// PiecewiseLinearBoundary

PiecewiseLinearBoundary::PiecewiseLinearBoundary(Partition partition, BoundarySide side,
                                                 std::vector<double> right_values,
                                                 std::vector<double> left_values)
    : partition_(std::move(partition)),
      side_(side),
      right_(std::move(right_values)),
      left_(std::move(left_values)) {
    const std::size_t n = partition_.intervals();
    require(right_.size() == n && left_.size() == n, ErrorKind::InvalidArgument,
            "boundary needs n right values and n left values for n = " + std::to_string(n));
    infinite_ = std::isinf(right_.front()) && right_.front() == infinity_for(side_);
    validate();
}

PiecewiseLinearBoundary PiecewiseLinearBoundary::continuous(Partition partition,
                                                            BoundarySide side,
                                                            std::span<const double> node_values) {
    const std::size_t n = partition.intervals();
    require(node_values.size() == n + 1, ErrorKind::InvalidArgument,
            "continuous boundary needs n + 1 node values");
    std::vector<double> right(node_values.begin(), node_values.end() - 1);
    std::vector<double> left(node_values.begin() + 1, node_values.end());
    return {std::move(partition), side, std::move(right), std::move(left)};
}

PiecewiseLinearBoundary PiecewiseLinearBoundary::infinite(Partition partition, BoundarySide side) {
    const std::size_t n = partition.intervals();
    const double v = infinity_for(side);
    return {std::move(partition), side, std::vector<double>(n, v), std::vector<double>(n, v)};
}

double PiecewiseLinearBoundary::right_value(std::size_t i) const {
    require(i < right_.size(), ErrorKind::InvalidArgument,
            "right value index " + std::to_string(i) + " out of range");
    return right_[i];
}

double PiecewiseLinearBoundary::left_value(std::size_t i) const {
    require(i >= 1 && i <= left_.size(), ErrorKind::InvalidArgument,
            "left value index " + std::to_string(i) + " out of range");
    return left_[i - 1];
}

double PiecewiseLinearBoundary::binding_value(std::size_t i) const {
    const std::size_t n = partition_.intervals();
    require(i <= n, ErrorKind::InvalidArgument, "node index out of range");
    if (i == 0) return right_[0];
    if (i == n) return left_[n - 1];
    return side_ == BoundarySide::Upper ? std::min(left_[i - 1], right_[i])
                                        : std::max(left_[i - 1], right_[i]);
}

double PiecewiseLinearBoundary::operator()(double t) const {
    const auto nodes = partition_.nodes();
    require(t >= 0.0 && t <= partition_.horizon(), ErrorKind::InvalidArgument,
            "time " + fmt(t) + " outside [0, T]");
    if (infinite_) return infinity_for(side_);
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), t);
    const auto k = static_cast<std::size_t>(it - nodes.begin());
    if (*it == t) return binding_value(k);
    const double t0 = nodes[k - 1];
    const double t1 = nodes[k];
    const double v0 = right_[k - 1];
    const double v1 = left_[k - 1];
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

void PiecewiseLinearBoundary::validate() const {
    const double inf = infinity_for(side_);
    auto check_value = [&](double v) {
        require(!std::isnan(v), ErrorKind::InvalidBoundaries, "boundary value is NaN");
        if (infinite_) {
            require(v == inf, ErrorKind::InvalidBoundaries,
                    "finite and infinite segments cannot mix within one boundary");
        } else {
            require(std::isfinite(v), ErrorKind::InvalidBoundaries,
                    std::isinf(v) && v == inf
                        ? "finite and infinite segments cannot mix within one boundary"
                        : "boundary value has the wrong infinite sign for its side");
        }
    };
    for (double v : right_) check_value(v);
    for (double v : left_) check_value(v);
    if (infinite_) return;
    for (std::size_t i = 1; i < right_.size(); ++i) {
        const double l = left_[i - 1];
        const double r = right_[i];
        if (side_ == BoundarySide::Upper) {
            require(l <= r, ErrorKind::InvalidBoundaries,
                    "upper boundary may only jump upward (node " + std::to_string(i) + ")");
        } else {
            require(l >= r, ErrorKind::InvalidBoundaries,
                    "lower boundary may only jump downward (node " + std::to_string(i) + ")");
        }
    }
}

// ---------------------------------------------------------------------------
// PiecewiseLinearBand

PiecewiseLinearBand::PiecewiseLinearBand(PiecewiseLinearBoundary lower,
                                         PiecewiseLinearBoundary upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    require(lower_.side() == BoundarySide::Lower && upper_.side() == BoundarySide::Upper,
            ErrorKind::InvalidBoundaries, "band needs a lower and an upper boundary");
    require(lower_.partition() == upper_.partition(), ErrorKind::InvalidBoundaries,
            "band boundaries must share one partition");
    const std::size_t n = lower_.partition().intervals();
    for (std::size_t i = 0; i < n; ++i) {
        require(lower_.right_value(i) < upper_.right_value(i), ErrorKind::InvalidBoundaries,
                "lower boundary must stay below upper boundary (node " + std::to_string(i) +
                    "+)");
        require(lower_.left_value(i + 1) < upper_.left_value(i + 1),
                ErrorKind::InvalidBoundaries,
                "lower boundary must stay below upper boundary (node " + std::to_string(i + 1) +
                    "-)");
    }
}

bool PiecewiseLinearBand::contains_start(double x0) const {
    return lower_.right_value(0) < x0 && x0 < upper_.right_value(0);
}

BandValues band_values(const PiecewiseLinearBand& band, std::size_t i, NodeSide side) {
    const std::size_t n = band.partition().intervals();
    const bool ok = side == NodeSide::Left ? (i >= 1 && i <= n) : (i < n);
    require(ok, ErrorKind::InvalidArgument,
            "node index " + std::to_string(i) + " out of range for this side");
    const double a = band.lower().value(i, side);
    const double b = band.upper().value(i, side);
    return {a, b, b - a};
}

// ---------------------------------------------------------------------------
// GeneralBoundary

GeneralBoundary::GeneralBoundary(BoundarySide side, double horizon, Evaluator evaluator)
    : side_(side), horizon_(horizon), evaluator_(std::move(evaluator)) {
    require(std::isfinite(horizon_) && horizon_ > 0.0, ErrorKind::InvalidArgument,
            "boundary horizon must be positive");
    require(static_cast<bool>(evaluator_), ErrorKind::InvalidArgument,
            "boundary evaluator is empty");
}

GeneralBoundary GeneralBoundary::infinite(BoundarySide side, double horizon) {
    const double v = infinity_for(side);
    GeneralBoundary gb(side, horizon, [v](double) { return v; });
    gb.finite_ = false;
    gb.constant_ = v;
    return gb;
}

GeneralBoundary GeneralBoundary::constant(BoundarySide side, double horizon, double value) {
    require(!std::isnan(value), ErrorKind::InvalidBoundaries, "constant boundary is NaN");
    if (std::isinf(value)) {
        require(value == infinity_for(side), ErrorKind::InvalidBoundaries,
                side == BoundarySide::Upper ? "upper boundary cannot be -inf"
                                            : "lower boundary cannot be +inf");
        return infinite(side, horizon);
    }
    GeneralBoundary gb(side, horizon, [value](double) { return value; });
    gb.constant_ = value;
    return gb;
}

double GeneralBoundary::checked(double t) const {
    const double v = evaluator_(t);
    if (std::isnan(v)) throw EvaluationError(t, "boundary evaluates to NaN at t = " + fmt(t));
    if (!std::isfinite(v)) {
        throw EvaluationError(t, "boundary evaluates to " + fmt(v) + " at t = " + fmt(t));
    }
    return v;
}

// ---------------------------------------------------------------------------
// Piecewise-linear approximations

namespace {

void require_matching_horizon(const GeneralBoundary& gb, const Partition& p) {
    const double T = p.horizon();
    require(std::abs(T - gb.horizon()) <= 1e-12 * std::max(1.0, T), ErrorKind::InvalidArgument,
            "partition horizon " + fmt(T) + " differs from boundary horizon " +
                fmt(gb.horizon()));
}

std::vector<double> node_values(const GeneralBoundary& gb, const Partition& p) {
    std::vector<double> v;
    v.reserve(p.nodes().size());
    for (double t : p.nodes()) v.push_back(gb.checked(t));
    return v;
}

// Largest excursion of gb above (sign = +1) or below (sign = -1) the chord
// between (lo, v_lo) and (hi, v_hi), sampled on m points and refined by
// Brent's method around the worst sample.
struct Excursions {
    double above = 0.0;
    double below = 0.0;
};

Excursions chord_excursions(const GeneralBoundary& gb, double lo, double hi, double v_lo,
                            double v_hi, std::size_t m) {
    const double width = hi - lo;
    auto chord = [&](double t) { return v_lo + (v_hi - v_lo) * (t - lo) / width; };
    auto diff = [&](double t) { return gb.checked(t) - chord(t); };

    std::vector<double> ts(m);
    std::vector<double> ds(m);
    double scale = std::max(std::abs(v_lo), std::abs(v_hi));
    for (std::size_t k = 0; k < m; ++k) {
        ts[k] = k + 1 == m ? hi : lo + width * static_cast<double>(k) / static_cast<double>(m - 1);
        ds[k] = diff(ts[k]);
        scale = std::max(scale, std::abs(ds[k] + chord(ts[k])));
    }
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);

    auto refine = [&](double sign) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < m; ++k) {
            if (sign * ds[k] > sign * ds[best]) best = k;
        }
        double peak = sign * ds[best];
        if (peak > 0.0) {
            const double a = ts[best == 0 ? 0 : best - 1];
            const double b = ts[best + 1 == m ? m - 1 : best + 1];
            auto neg = [&](double t) { return -sign * diff(t); };
            const auto r = boost::math::tools::brent_find_minima(
                neg, a, b, std::numeric_limits<double>::digits / 2);
            peak = std::max(peak, -r.second);
        }
        return std::max(peak, 0.0) + floor;
    };
    return {refine(+1.0), refine(-1.0)};
}

}  // namespace

PiecewiseLinearBoundary chord_boundary(const GeneralBoundary& gb, const Partition& p) {
    require_matching_horizon(gb, p);
    if (!gb.is_finite()) return PiecewiseLinearBoundary::infinite(p, gb.side());
    const auto v = node_values(gb, p);
    return PiecewiseLinearBoundary::continuous(p, gb.side(), v);
}

Envelopes envelopes(const GeneralBoundary& gb, const Partition& p,
                    std::size_t samples_per_interval) {
    require(samples_per_interval >= 2, ErrorKind::InvalidArgument,
            "envelope construction needs at least 2 samples per interval");
    require_matching_horizon(gb, p);
    if (!gb.is_finite()) {
        return {PiecewiseLinearBoundary::infinite(p, gb.side()),
                PiecewiseLinearBoundary::infinite(p, gb.side())};
    }
    const std::size_t n = p.intervals();
    const auto v = node_values(gb, p);

    std::vector<Excursions> ex(n);
    for (std::size_t i = 0; i < n; ++i) {
        ex[i] = chord_excursions(gb, p.node(i), p.node(i + 1), v[i], v[i + 1],
                                 samples_per_interval);
    }
    // Per-node shifts: the larger of the adjacent intervals' shifts.
    auto node_shift = [&](std::size_t j, double Excursions::*field) {
        double s = 0.0;
        if (j > 0) s = std::max(s, ex[j - 1].*field);
        if (j < n) s = std::max(s, ex[j].*field);
        return s;
    };

    std::vector<double> inner(n + 1);
    std::vector<double> outer(n + 1);
    const bool upper = gb.side() == BoundarySide::Upper;
    for (std::size_t j = 0; j <= n; ++j) {
        const double down = node_shift(j, &Excursions::below);
        const double up = node_shift(j, &Excursions::above);
        inner[j] = upper ? v[j] - down : v[j] + up;
        outer[j] = upper ? v[j] + up : v[j] - down;
    }
    return {PiecewiseLinearBoundary::continuous(p, gb.side(), inner),
            PiecewiseLinearBoundary::continuous(p, gb.side(), outer)};
}

}  // namespace bcp
