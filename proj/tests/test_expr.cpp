#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "expr.hpp"

using namespace minerr;

namespace {

double eval_at(const Expr& e, double t, const Vector& y, const Vector& u) {
    EvalContext ctx{t, &y, &u};
    return e.eval(ctx);
}

double eval_t(const std::string& src, double t) {
    const Expr e = parse_expr(src, 0, 0);
    EvalContext ctx{t, nullptr, nullptr};
    return e.eval(ctx);
}

}  // namespace

TEST_CASE("paper signal strings") {
    const Expr d1 = parse_expr("2*cos(t)/(1+t)", 0, 0);
    EvalContext ctx{0.0, nullptr, nullptr};
    CHECK(d1.eval(ctx) == doctest::Approx(2.0));
    ctx.t = 1.0;
    CHECK(d1.eval(ctx) == doctest::Approx(2.0 * std::cos(1.0) / 2.0));

    const Expr beta2 = parse_expr("y2^2 - 0.2*y2^3", 2, 1);
    const Vector y{0.0, 1.0};
    const Vector u{0.0};
    CHECK(eval_at(beta2, 0.0, y, u) == doctest::Approx(0.8));
}

TEST_CASE("simple golden evaluations") {
    CHECK(eval_t("sin(t)", 0.0) == 0.0);
    CHECK(eval_t("4/(1+t)", 1.0) == doctest::Approx(2.0));
    CHECK(eval_t("min(2,3) + max(2,3)", 0.0) == doctest::Approx(5.0));
    CHECK(eval_t("abs(-3) + exp(0)", 0.0) == doctest::Approx(4.0));
}

TEST_CASE("precedence golden tests") {
    CHECK(eval_t("1+2*3", 0.0) == doctest::Approx(7.0));
    CHECK(eval_t("2^3^2", 0.0) == doctest::Approx(512.0));
    CHECK(eval_t("-2^2", 0.0) == doctest::Approx(-4.0));
    CHECK(eval_t("2^-2", 0.0) == doctest::Approx(0.25));
    CHECK(eval_t("1-2-3", 0.0) == doctest::Approx(-4.0));
    CHECK(eval_t("8/4/2", 0.0) == doctest::Approx(1.0));
}

TEST_CASE("parse errors carry offsets") {
    CHECK_THROWS_AS(parse_expr("sin(", 0, 0), ParseError);
    try {
        parse_expr("sin(", 0, 0);
    } catch (const ParseError& ex) {
        CHECK(ex.offset == 4);
    }
    CHECK_THROWS_AS(parse_expr("foo(t)", 0, 0), ParseError);
    CHECK_THROWS_AS(parse_expr("1 + ", 0, 0), ParseError);
    CHECK_THROWS_AS(parse_expr("(1+2", 0, 0), ParseError);
    CHECK_THROWS_AS(parse_expr("1 2", 0, 0), ParseError);
    CHECK_THROWS_AS(parse_expr("min(1)", 0, 0), ParseError);
}

TEST_CASE("variables are bounded by declared dims") {
    CHECK_NOTHROW(parse_expr("y1 + y2 + u1", 2, 1));
    CHECK_THROWS_AS(parse_expr("y3", 2, 1), ParseError);
    CHECK_THROWS_AS(parse_expr("u2", 2, 1), ParseError);
    CHECK_THROWS_AS(parse_expr("y0", 2, 1), ParseError);
    CHECK_THROWS_AS(parse_expr("y1", 0, 0), ParseError);
}

TEST_CASE("eval errors instead of non-finite results") {
    CHECK_THROWS_AS(eval_t("1/t", 0.0), EvalError);
    CHECK_THROWS_AS(eval_t("1/(1-t)", 1.0), EvalError);
    CHECK_THROWS_AS(eval_t("exp(t)*exp(t)", 1000.0), EvalError);
}

TEST_CASE("whitespace insensitivity") {
    CHECK(eval_t("  2 * cos( t ) / ( 1 + t )  ", 0.0) == doctest::Approx(2.0));
}

TEST_CASE("round-trip: parse(print(e)) evaluates identically") {
    const std::vector<std::string> sources = {
        "2*cos(t)/(1+t)",     "y2^2 - 0.2*y2^3",      "min(y1, max(u1, t))",
        "-t^2 + 3*t - 1",     "exp(-t)*sin(y1+ u2)",  "abs(y2 - u1)/(1 + t^2)",
        "1 + 2*3 - 4/5^2",
    };
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (const auto& src : sources) {
        const Expr original = parse_expr(src, 2, 2);
        const Expr reparsed = parse_expr(original.print(), 2, 2);
        for (int trial = 0; trial < 100; ++trial) {
            const Vector y{dist(rng), dist(rng)};
            const Vector u{dist(rng), dist(rng)};
            const double t = std::abs(dist(rng));
            CHECK(eval_at(original, t, y, u) == eval_at(reparsed, t, y, u));
        }
    }
}

TEST_CASE("integer power fast path is exact for small integers") {
    CHECK(eval_t("3^3", 0.0) == 27.0);
    CHECK(eval_t("2^10", 0.0) == 1024.0);
    CHECK(eval_t("2^0.5", 0.0) == doctest::Approx(std::sqrt(2.0)));
}
