#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace bcp {

enum class BoundarySide { Lower, Upper };

/// Which one-sided limit of a piecewise-linear boundary at a node.
enum class NodeSide { Left, Right };

/// Strictly increasing time nodes 0 = t_0 < t_1 < ... < t_n = T, n >= 1.
class Partition {
public:
    explicit Partition(std::vector<double> nodes);

    std::size_t intervals() const noexcept { return nodes_.size() - 1; }
    double horizon() const noexcept { return nodes_.back(); }
    double node(std::size_t i) const { return nodes_.at(i); }
    /// Width of interval i, i = 1..n.
    double gap(std::size_t i) const;
    std::span<const double> nodes() const noexcept { return nodes_; }

    bool operator==(const Partition&) const = default;

private:
    std::vector<double> nodes_;
};

/// Nodes i*T/n for i = 0..n.
Partition uniform_partition(double horizon, std::size_t n);

/// Boundary that is linear on every open interval of a partition. Node
/// values are held per side: right_value(i) is the value at t_i+ (i < n) and
/// left_value(i) the value at t_i- (i > 0). Upper boundaries may only jump
/// up, lower boundaries only down. A boundary is either finite everywhere
/// or identically infinite (-inf for lower, +inf for upper).
class PiecewiseLinearBoundary {
public:
    PiecewiseLinearBoundary(Partition partition, BoundarySide side,
                            std::vector<double> right_values,
                            std::vector<double> left_values);

    /// Continuous boundary through the given node values (n + 1 of them).
    static PiecewiseLinearBoundary continuous(Partition partition, BoundarySide side,
                                              std::span<const double> node_values);
    static PiecewiseLinearBoundary infinite(Partition partition, BoundarySide side);

    const Partition& partition() const noexcept { return partition_; }
    BoundarySide side() const noexcept { return side_; }
    bool is_infinite() const noexcept { return infinite_; }

    double right_value(std::size_t i) const;
    double left_value(std::size_t i) const;
    double value(std::size_t i, NodeSide side) const {
        return side == NodeSide::Left ? left_value(i) : right_value(i);
    }
    /// Most restrictive of the one-sided limits at node i.
    double binding_value(std::size_t i) const;

    /// Value at time t; at a node the binding value is returned.
    double operator()(double t) const;

    /// Re-checks every structural invariant; throws InvalidBoundaries.
    void validate() const;

private:
    Partition partition_;
    BoundarySide side_;
    std::vector<double> right_;  // index 0..n-1
    std::vector<double> left_;   // index 0..n-1 holds nodes 1..n
    bool infinite_ = false;
};

struct BandValues {
    double alpha;
    double beta;
    double delta;
};

/// Lower/upper pair on one shared partition with a < b on every node side.
class PiecewiseLinearBand {
public:
    PiecewiseLinearBand(PiecewiseLinearBoundary lower, PiecewiseLinearBoundary upper);

    const PiecewiseLinearBoundary& lower() const noexcept { return lower_; }
    const PiecewiseLinearBoundary& upper() const noexcept { return upper_; }
    const Partition& partition() const noexcept { return lower_.partition(); }

    bool contains_start(double x0) const;

private:
    PiecewiseLinearBoundary lower_;
    PiecewiseLinearBoundary upper_;
};

BandValues band_values(const PiecewiseLinearBand& band, std::size_t i, NodeSide side);

/// Arbitrary boundary given by an evaluator on [0, T].
class GeneralBoundary {
public:
    using Evaluator = std::function<double(double)>;

    GeneralBoundary(BoundarySide side, double horizon, Evaluator evaluator);

    static GeneralBoundary infinite(BoundarySide side, double horizon);
    static GeneralBoundary constant(BoundarySide side, double horizon, double value);

    BoundarySide side() const noexcept { return side_; }
    double horizon() const noexcept { return horizon_; }
    bool is_finite() const noexcept { return finite_; }
    /// Set when the boundary is known to be constant.
    std::optional<double> constant_value() const noexcept { return constant_; }

    /// Raw evaluation (may return NaN or infinities).
    double operator()(double t) const { return evaluator_(t); }
    /// Evaluation that throws EvaluationError on NaN or a non-finite value.
    double checked(double t) const;

private:
    BoundarySide side_;
    double horizon_;
    Evaluator evaluator_;
    bool finite_ = true;
    std::optional<double> constant_;
};

/// Continuous piecewise-linear interpolant of gb at the partition nodes.
PiecewiseLinearBoundary chord_boundary(const GeneralBoundary& gb, const Partition& p);

struct Envelopes {
    PiecewiseLinearBoundary inner;  ///< on the inside of the band
    PiecewiseLinearBoundary outer;  ///< on the outside of the band
};

inline constexpr std::size_t kDefaultEnvelopeSamples = 50;

/// Continuous piecewise-linear envelopes bracketing gb on each subinterval.
/// For an upper boundary inner <= gb <= outer; mirrored for a lower one.
/// Each subinterval's chord is shifted by the largest deviation of gb from
/// it, found on m equally spaced samples and refined around the worst one.
/// Node values take the larger of the two adjacent shifts so no jumps are
/// introduced.
Envelopes envelopes(const GeneralBoundary& gb, const Partition& p,
                    std::size_t samples_per_interval = kDefaultEnvelopeSamples);

}  // namespace bcp
