#pragma once

#include "bcp/boundary.hpp"
#include "bcp/transforms.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bcp {

/// Arithmetic expression in the variable t.
///
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := base ('^' factor)?
///   base   := number | 't' | 'inf' | '-inf' | func '(' expr ')' | '(' expr ')' | '-' base
///   func   := exp | log | sqrt | sin | cos | abs
///
/// Parsed once into a postfix program. If evaluation at t = 0 gives NaN the
/// value is taken as the limit from the right (removable singularities such
/// as exp(-1/t) terms).
class BoundaryExpr {
public:
    static BoundaryExpr parse(std::string_view text);

    double operator()(double t) const;
    /// Plain evaluation without the t = 0 limit rule.
    double evaluate_raw(double t) const;

    const std::string& source() const noexcept { return source_; }
    bool depends_on_time() const noexcept { return uses_t_; }
    /// Value of an expression that does not mention t.
    std::optional<double> constant_value() const noexcept { return constant_; }

    enum class Op { Push, Time, Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Sqrt, Sin, Cos, Abs };
    struct Instr {
        Op op;
        double value = 0.0;
    };

    static constexpr std::size_t kMaxStack = 64;

private:
    friend class ExprParser;

    std::string source_;
    std::vector<Instr> program_;
    bool uses_t_ = false;
    std::optional<double> constant_;
};

inline BoundaryExpr parse_boundary(std::string_view text) { return BoundaryExpr::parse(text); }

/// Boundary backed by an expression; constant expressions (including +-inf)
/// become constant or infinite boundaries.
GeneralBoundary to_boundary(const BoundaryExpr& expr, BoundarySide side, double horizon);

/// Coefficient function of time backed by an expression.
TimeFunction to_time_function(const BoundaryExpr& expr);

}  // namespace bcp
