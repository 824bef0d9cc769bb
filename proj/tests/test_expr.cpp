#include "bcp/error.hpp"
#include "bcp/expr.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace bcp;

namespace {

std::size_t error_offset(const std::string& text) {
    try {
        (void)parse_boundary(text);
    } catch (const ParseError& e) {
        return e.offset();
    }
    ADD_FAILURE() << "parsed: " << text;
    return std::string::npos;
}

}  // namespace

TEST(Expr, Arithmetic) {
    EXPECT_DOUBLE_EQ(parse_boundary("sqrt(1+t)")(0.0), 1.0);
    EXPECT_DOUBLE_EQ(parse_boundary("1 + 2*3")(0.0), 7.0);
    EXPECT_DOUBLE_EQ(parse_boundary("(1 + 2)*3")(0.0), 9.0);
    EXPECT_DOUBLE_EQ(parse_boundary("8/4/2")(0.0), 1.0);
    EXPECT_DOUBLE_EQ(parse_boundary("10-4-3")(0.0), 3.0);
    EXPECT_DOUBLE_EQ(parse_boundary("2^3^2")(0.0), 512.0);
    EXPECT_DOUBLE_EQ(parse_boundary("2*t^2")(3.0), 18.0);
    EXPECT_DOUBLE_EQ(parse_boundary("-t")(2.0), -2.0);
    EXPECT_DOUBLE_EQ(parse_boundary("1.5e1 + .5")(0.0), 15.5);
    EXPECT_DOUBLE_EQ(parse_boundary("abs(-3) + cos(0) + sin(0) + log(exp(2))")(0.0), 6.0);
}

TEST(Expr, Infinity) {
    EXPECT_EQ(parse_boundary("inf")(0.0), std::numeric_limits<double>::infinity());
    EXPECT_EQ(parse_boundary("-inf")(0.5), -std::numeric_limits<double>::infinity());
    const auto e = parse_boundary(" -inf ");
    ASSERT_TRUE(e.constant_value());
    EXPECT_FALSE(e.depends_on_time());
}

TEST(Expr, ConstantsAndSource) {
    const auto c = parse_boundary("exp(1)");
    ASSERT_TRUE(c.constant_value());
    EXPECT_DOUBLE_EQ(*c.constant_value(), std::exp(1.0));
    const auto v = parse_boundary("1+t");
    EXPECT_FALSE(v.constant_value());
    EXPECT_TRUE(v.depends_on_time());
    EXPECT_EQ(v.source(), "1+t");
}

TEST(Expr, DanielsLimitAtZero) {
    const auto d = parse_boundary("0.5 - t*log(0.25+0.25*sqrt(1+8*exp(-1/t)))");
    EXPECT_DOUBLE_EQ(d(0.0), 0.5);
    const double t = 0.7;
    EXPECT_DOUBLE_EQ(d(t), 0.5 - t * std::log(0.25 + 0.25 * std::sqrt(1 + 8 * std::exp(-1 / t))));
}

TEST(Expr, SyntaxErrorsCarryOffsets) {
    EXPECT_EQ(error_offset("1+*2"), 2u);
    EXPECT_EQ(error_offset("(1+2"), 4u);
    EXPECT_EQ(error_offset("1 2"), 2u);
    EXPECT_EQ(error_offset(""), 0u);
    EXPECT_EQ(error_offset("2*foo(t)"), 2u);
    EXPECT_EQ(error_offset("sqrt 4"), 5u);
    EXPECT_EQ(error_offset("1e+"), 1u);
    EXPECT_EQ(error_offset("1 $ 2"), 2u);
    try {
        (void)parse_boundary("1+*2");
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("offset 2"), std::string::npos);
    }
}

TEST(Expr, DeepNestingIsRejectedNotCrashing) {
    std::string deep;
    for (int i = 0; i < 100; ++i) deep += "1+(";
    deep += "1";
    for (int i = 0; i < 100; ++i) deep += ")";
    EXPECT_THROW((void)parse_boundary(deep), ParseError);
}

TEST(Expr, BoundaryAndTimeFunctionAdapters) {
    const auto b = to_boundary(parse_boundary("1+t"), BoundarySide::Upper, 2.0);
    EXPECT_TRUE(b.is_finite());
    EXPECT_DOUBLE_EQ(b(1.5), 2.5);
    const auto inf = to_boundary(parse_boundary("inf"), BoundarySide::Upper, 2.0);
    EXPECT_FALSE(inf.is_finite());
    EXPECT_THROW((void)to_boundary(parse_boundary("inf"), BoundarySide::Lower, 2.0), Error);
    const auto c = to_boundary(parse_boundary("3"), BoundarySide::Lower, 1.0);
    ASSERT_TRUE(c.constant_value());
    const auto f = to_time_function(parse_boundary("0.1+0.05*exp(-t)"));
    EXPECT_FALSE(f.constant);
    EXPECT_DOUBLE_EQ(f(0.0), 0.15);
    EXPECT_TRUE(to_time_function(parse_boundary("2")).constant);
}
