#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <srn/scalar.hpp>

using namespace srn;

TEST_CASE("decimal literals convert to exact rationals") {
    CHECK(rational_from_decimal("3") == Rational(3));
    CHECK(rational_from_decimal("12.375") == Rational(99, 8));
    CHECK(rational_from_decimal("-12.375e-2") == Rational(-99, 800));
    CHECK(rational_from_decimal("2.5e3") == Rational(2500));
    CHECK(rational_from_decimal("+0.25") == Rational(1, 4));
    CHECK(rational_from_decimal("3/4") == Rational(3, 4));
    CHECK(rational_from_decimal("0") == Rational(0));
    CHECK(rational_from_decimal("0.000") == Rational(0));
}

TEST_CASE("fractional digits with leading zeros are read as decimal") {
    // "0.013533" has digit string "013533"; GMP would read that as octal.
    CHECK(rational_from_decimal("0.013533") == Rational(13533, 1000000));
    CHECK(rational_from_decimal("0.07") == Rational(7, 100));
    CHECK(rational_from_decimal("1.013533528323661259e-01") ==
          Rational(1013533528323661259LL) / scalar_ipow(Rational(10), 19));
}

TEST_CASE("malformed literals raise parse errors") {
    CHECK_THROWS_AS(rational_from_decimal(""), ParseError);
    CHECK_THROWS_AS(rational_from_decimal("abc"), ParseError);
    CHECK_THROWS_AS(rational_from_decimal("1.2.3"), ParseError);
    CHECK_THROWS_AS(rational_from_decimal("1e"), ParseError);
    CHECK_THROWS_AS(rational_from_decimal("1x"), ParseError);
}

TEST_CASE("integer powers are exact and invert for negative exponents") {
    CHECK(scalar_ipow(Rational(2, 3), 3) == Rational(8, 27));
    CHECK(scalar_ipow(Rational(2, 3), -3) == Rational(27, 8));
    CHECK(scalar_ipow(Rational(5), 0) == Rational(1));
    CHECK(scalar_ipow(Rational(0), 4) == Rational(0));
    CHECK_THROWS_AS(scalar_ipow(Rational(0), -1), NumericalError);
    CHECK(scalar_ipow(2.0, 10) == doctest::Approx(1024.0));
}

TEST_CASE("general powers refuse non-integer exponents on the exact backend") {
    CHECK(scalar_pow(Rational(4), Rational(2)) == Rational(16));
    CHECK_THROWS_AS(scalar_pow(Rational(4), Rational(1, 2)), NumericalError);
    CHECK(scalar_pow(2.0, 0.5) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("floor and ceil agree with the mathematical definitions") {
    CHECK(scalar_floor(Rational(7, 2)) == Rational(3));
    CHECK(scalar_floor(Rational(-7, 2)) == Rational(-4));
    CHECK(scalar_floor(Rational(4)) == Rational(4));
    CHECK(scalar_ceil(Rational(7, 2)) == Rational(4));
    CHECK(scalar_ceil(Rational(-7, 2)) == Rational(-3));
    CHECK(scalar_floor(3.7) == doctest::Approx(3.0));
    CHECK(scalar_ceil(-3.7) == doctest::Approx(-3.0));
}

TEST_CASE("runtime mpfr precision honours the requested mantissa") {
    unsigned eff = set_high_precision(200);
    CHECK(eff >= 200);
    HighFloat third = HighFloat(1) / 3;
    // 1/3 at >=200 bits differs from the binary64 value in the tail
    CHECK(std::abs(to_double(third - HighFloat(1.0 / 3.0))) > 0);
    CHECK(std::abs(to_double(third) - 1.0 / 3.0) < 1e-15);
    set_high_precision(256);
}

TEST_CASE("scalar rendering round-trips") {
    CHECK(scalar_to_string(Rational(-99, 800)) == "-99/800");
    CHECK(scalar_to_string(Rational(5)) == "5");
    double v = 0.1 + 0.2;
    CHECK(std::stod(scalar_to_string(v)) == v);  // 17 digits round-trip
}

TEST_CASE("backend construction reports effective precision") {
    Backend hb = make_backend(Precision::High, 128);
    CHECK(hb.effective_bits >= 128);
    Backend db = make_backend(Precision::Binary64);
    CHECK(db.effective_bits == 53);
    Backend eb = make_backend(Precision::Exact);
    CHECK(eb.effective_bits == 0);
    CHECK(scalar_traits<Rational>::is_exact);
    CHECK_FALSE(scalar_traits<double>::is_exact);
    set_high_precision(256);
}
