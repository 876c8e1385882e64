#include <doctest.h>

#include <srn/expr.hpp>

using namespace srn;

namespace {
double evald(const std::string& text, double x) {
    return eval_expr<double>(parse_expression(text), x);
}
Rational evalq(const std::string& text, const Rational& x) {
    return eval_expr<Rational>(parse_expression(text), x);
}
}  // namespace

TEST_CASE("arithmetic expressions evaluate with usual precedence") {
    CHECK(evald("2 + 3 * 4", 0) == doctest::Approx(14));
    CHECK(evald("(2 + 3) * 4", 0) == doctest::Approx(20));
    CHECK(evald("2 - 3 - 4", 0) == doctest::Approx(-5));  // left assoc
    CHECK(evald("-x + 1", 5) == doctest::Approx(-4));
    CHECK(evald("12 / 4 / 3", 0) == doctest::Approx(1));
    CHECK(evalq("x * (x - 1)", Rational(7)) == Rational(42));
    CHECK(evalq("x / 2", Rational(7)) == Rational(7, 2));
}

TEST_CASE("builtins: floor ceil min max pow") {
    CHECK(evald("floor(x / 2)", 7) == doctest::Approx(3));
    CHECK(evald("ceil(x / 2)", 7) == doctest::Approx(4));
    CHECK(evald("min(x, 3)", 7) == doctest::Approx(3));
    CHECK(evald("max(x, 3, 11)", 7) == doctest::Approx(11));
    CHECK(evald("pow(2, x)", 10) == doctest::Approx(1024));
    CHECK(evalq("pow(x, 2)", Rational(1, 2)) == Rational(1, 4));
    CHECK(evalq("pow(floor((x+1)/2), -2)", Rational(5)) == Rational(1, 9));
}

TEST_CASE("piecewise short-circuits on the first true guard") {
    const char* pw = "piecewise(x < 2, 0, x < 5, 10, 1/(x-5))";
    CHECK(evald(pw, 1) == doctest::Approx(0));
    CHECK(evald(pw, 3) == doctest::Approx(10));
    CHECK(evald(pw, 7) == doctest::Approx(0.5));
    // the guarded branch 1/(x-5) must not be evaluated at x=5
    CHECK(evald("piecewise(x < 6, 3, 1/(x-5))", 5) == doctest::Approx(3));
    CHECK_THROWS_AS(evald("1/(x-5)", 5), NumericalError);
}

TEST_CASE("comparisons work on the exact backend") {
    CHECK(evalq("piecewise(x <= 1/2, 1, 2)", Rational(1, 2)) == Rational(1));
    CHECK(evalq("piecewise(x == 3, 7, 0)", Rational(3)) == Rational(7));
    CHECK(evalq("piecewise(x != 3, 7, 0)", Rational(3)) == Rational(0));
    CHECK(evalq("piecewise(x >= 4, 1, 0)", Rational(4)) == Rational(1));
}

TEST_CASE("rational capability requires integer exponents") {
    CHECK(rational_capable(parse_expression("pow(2, x)")));
    CHECK(rational_capable(parse_expression("pow(x, -2)")));
    CHECK_FALSE(rational_capable(parse_expression("pow(x, 1/2)")));
    CHECK_FALSE(rational_capable(parse_expression("pow(x, 2.5)")));
    CHECK(rational_capable(parse_expression("floor(x/2) * 3 + 1")));
}

TEST_CASE("evaluation failures raise numerical errors") {
    CHECK_THROWS_AS(evald("1 / (x - 3)", 3), NumericalError);
    CHECK_THROWS_AS(evalq("pow(x, -1)", Rational(0)), NumericalError);
    CHECK_THROWS_AS(evalq("pow(x, 1/2)", Rational(4)), NumericalError);
}

TEST_CASE("syntax errors carry positions and render round-trips parse") {
    CHECK_THROWS_AS(parse_expression("2 +"), ParseError);
    CHECK_THROWS_AS(parse_expression("foo(x)"), ParseError);
    CHECK_THROWS_AS(parse_expression("(x"), ParseError);
    CHECK_THROWS_AS(parse_expression("piecewise(x < 2)"), ParseError);

    for (const char* text : {"2 + 3 * x", "piecewise(x < 2, 0, pow(floor(x/2), 2))",
                             "min(x, max(1, ceil(x/3)))"}) {
        ExprPtr e = parse_expression(text);
        ExprPtr again = parse_expression(render_expression(e));
        for (long x = 0; x <= 9; ++x)
            CHECK(eval_expr<double>(e, double(x)) ==
                  doctest::Approx(eval_expr<double>(again, double(x))));
    }
}
