#include <cmath>

#include <gtest/gtest.h>

#include "ffinv/expression.hpp"

using ffinv::ConfigError;
using ffinv::Expression;
using ffinv::Vec2;

TEST(Expression, Arithmetic) {
    const Vec2 p{0.5, -2.0};
    EXPECT_DOUBLE_EQ(Expression("1 + x + y")(p), -0.5);
    EXPECT_DOUBLE_EQ(Expression("2*x - y/4")(p), 1.5);
    EXPECT_DOUBLE_EQ(Expression("-x^2")(p), -0.25);
    EXPECT_DOUBLE_EQ(Expression("2^3^2")({0, 0}), 512.0);
    EXPECT_DOUBLE_EQ(Expression("(1 + x) * (1 - x)")(p), 0.75);
    EXPECT_DOUBLE_EQ(Expression("1e-2 * 3")({0, 0}), 0.03);
}

TEST(Expression, FunctionsAndConstants) {
    const Vec2 p{0.3, 0.4};
    EXPECT_DOUBLE_EQ(Expression("r")(p), 0.5);
    EXPECT_DOUBLE_EQ(Expression("sin(pi/2) + cos(0)")(p), 2.0);
    EXPECT_NEAR(Expression("exp(-4*r^2)")(p), std::exp(-1.0), 1e-15);
    EXPECT_DOUBLE_EQ(Expression("sqrt(abs(-9))")(p), 3.0);
    EXPECT_DOUBLE_EQ(Expression("log(e)")(p), 1.0);
}

TEST(Expression, Errors) {
    for (const char* bad : {"", "1 +", "x y", "foo(1)", "sin 1", "(1", "1)", "2 ** 3", "z"})
        EXPECT_THROW(Expression{bad}, ConfigError) << bad;
}

TEST(Expression, KeepsText) { EXPECT_EQ(Expression("1 + x").text(), "1 + x"); }
