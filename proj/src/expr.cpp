#include "bcp/expr.hpp"

#include "bcp/error.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace bcp {

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    BoundaryExpr run() {
        expr();
        skip_space();
        if (pos_ < text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
        BoundaryExpr out;
        out.source_ = std::string(text_);
        out.program_ = std::move(program_);
        out.uses_t_ = uses_t_;
        if (!uses_t_) out.constant_ = out.evaluate_raw(0.0);
        return out;
    }

private:
    using Op = BoundaryExpr::Op;

    [[noreturn]] void error(const std::string& what) const { error_at(pos_, what); }
    [[noreturn]] void error_at(std::size_t at, const std::string& what) const {
        throw ParseError(at, "syntax error at offset " + std::to_string(at) + ": " + what);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) error(std::string("expected '") + c + "', got end of input");
            error(std::string("expected '") + c + "', got '" + text_[pos_] + "'");
        }
    }

    void emit(Op op, double value = 0.0) {
        program_.push_back({op, value});
        switch (op) {
            case Op::Push:
            case Op::Time: ++depth_; break;
            case Op::Add:
            case Op::Sub:
            case Op::Mul:
            case Op::Div:
            case Op::Pow: --depth_; break;
            default: break;
        }
        if (depth_ > BoundaryExpr::kMaxStack) error("expression is nested too deeply");
    }

    void expr() {
        term();
        for (;;) {
            if (accept('+')) {
                term();
                emit(Op::Add);
            } else if (accept('-')) {
                term();
                emit(Op::Sub);
            } else {
                return;
            }
        }
    }

    void term() {
        factor();
        for (;;) {
            if (accept('*')) {
                factor();
                emit(Op::Mul);
            } else if (accept('/')) {
                factor();
                emit(Op::Div);
            } else {
                return;
            }
        }
    }

    void factor() {
        base();
        if (accept('^')) {
            factor();
            emit(Op::Pow);
        }
    }

    void base() {
        skip_space();
        if (pos_ >= text_.size()) error("unexpected end of input");
        const char c = text_[pos_];
        if (c == '-') {
            ++pos_;
            base();
            emit(Op::Neg);
        } else if (c == '(') {
            ++pos_;
            expr();
            expect(')');
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            number();
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            identifier();
        } else {
            error(std::string("unexpected '") + c + "'");
        }
    }

    void number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t count = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++count;
            }
            return count;
        };
        std::size_t mantissa = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) error_at(start, "malformed number");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            const std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) error_at(mark, "malformed exponent");
        }
        double value = 0.0;
        const auto r = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (r.ec != std::errc() || r.ptr != text_.data() + pos_) {
            error_at(start, "malformed number");
        }
        emit(Op::Push, value);
    }

    void identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "t") {
            uses_t_ = true;
            emit(Op::Time);
            return;
        }
        if (name == "inf") {
            emit(Op::Push, std::numeric_limits<double>::infinity());
            return;
        }
        static constexpr std::array<std::pair<std::string_view, Op>, 6> kFunctions{{
            {"exp", Op::Exp},
            {"log", Op::Log},
            {"sqrt", Op::Sqrt},
            {"sin", Op::Sin},
            {"cos", Op::Cos},
            {"abs", Op::Abs},
        }};
        for (const auto& [fname, op] : kFunctions) {
            if (fname == name) {
                expect('(');
                expr();
                expect(')');
                emit(op);
                return;
            }
        }
        error_at(start, "unknown identifier '" + std::string(name) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t depth_ = 0;
    bool uses_t_ = false;
    std::vector<BoundaryExpr::Instr> program_;
};

BoundaryExpr BoundaryExpr::parse(std::string_view text) { return ExprParser(text).run(); }

double BoundaryExpr::evaluate_raw(double t) const {
    std::array<double, kMaxStack> stack;
    std::size_t top = 0;
    for (const Instr& in : program_) {
        switch (in.op) {
            case Op::Push: stack[top++] = in.value; break;
            case Op::Time: stack[top++] = t; break;
            case Op::Add: --top; stack[top - 1] += stack[top]; break;
            case Op::Sub: --top; stack[top - 1] -= stack[top]; break;
            case Op::Mul: --top; stack[top - 1] *= stack[top]; break;
            case Op::Div: --top; stack[top - 1] /= stack[top]; break;
            case Op::Pow: --top; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
            case Op::Neg: stack[top - 1] = -stack[top - 1]; break;
            case Op::Exp: stack[top - 1] = std::exp(stack[top - 1]); break;
            case Op::Log: stack[top - 1] = std::log(stack[top - 1]); break;
            case Op::Sqrt: stack[top - 1] = std::sqrt(stack[top - 1]); break;
            case Op::Sin: stack[top - 1] = std::sin(stack[top - 1]); break;
            case Op::Cos: stack[top - 1] = std::cos(stack[top - 1]); break;
            case Op::Abs: stack[top - 1] = std::abs(stack[top - 1]); break;
        }
    }
    return stack[0];
}

double BoundaryExpr::operator()(double t) const {
    const double v = evaluate_raw(t);
    if (std::isnan(v) && t == 0.0) return evaluate_raw(std::numeric_limits<double>::min());
    return v;
}

GeneralBoundary to_boundary(const BoundaryExpr& expr, BoundarySide side, double horizon) {
    if (const auto c = expr.constant_value()) return GeneralBoundary::constant(side, horizon, *c);
    return GeneralBoundary(side, horizon, [expr](double t) { return expr(t); });
}

TimeFunction to_time_function(const BoundaryExpr& expr) {
    if (const auto c = expr.constant_value()) return TimeFunction::of_constant(*c);
    return {[expr](double t) { return expr(t); }, std::nullopt};
}

}  // namespace bcp
