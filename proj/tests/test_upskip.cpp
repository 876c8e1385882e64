#include <doctest.h>

#include "helpers.hpp"

#include <srn/upskip.hpp>

#include <cmath>

using namespace srn;

namespace {
const double kPiSqOver3Minus1 = M_PI * M_PI / 3.0 - 1.0;  // 2.2898681336964528
}

TEST_CASE("ratio function of the floor-rate network is exactly 1/(m(m')^2)") {
    auto tr = srntest::translated("nonunique_floor.srn");
    REQUIRE(tr.omega_minus == -2);
    REQUIRE(tr.omega_plus == 1);
    REQUIRE(tr.U == 1);
    CHECK(h_fun<Rational>(tr, 3) == Rational(1));
    CHECK(h_fun<Rational>(tr, 4) == Rational(1, 4));
    CHECK(h_fun<Rational>(tr, 5) == Rational(1, 16));
    CHECK(h_fun<Rational>(tr, 6) == Rational(1, 36));
    CHECK(h_fun<Rational>(tr, 7) == Rational(1, 81));
    CHECK(h_fun<Rational>(tr, 8) == Rational(1, 144));
    // h(x) = 1 / (floor(x/2) * floor((x-1)/2))^2 for this network
    for (long x = 3; x <= 40; ++x) {
        Rational den((x / 2) * ((x - 1) / 2));
        CHECK(h_fun<Rational>(tr, x) == Rational(1) / (den * den));
    }
}

TEST_CASE("convergents alternate around the continued-fraction value") {
    auto tr = srntest::translated("nonunique_floor.srn");
    CHECK(to_double(psi_convergent<double>(tr, 3, 700)) ==
          doctest::Approx(1.5350874927702947).epsilon(1e-12));
    CHECK(to_double(psi_convergent<double>(tr, 3, 699)) ==
          doctest::Approx(2.6791971061186040).epsilon(1e-12));
    auto iv = psi_convergents<double>(tr, 3, 700);
    CHECK(iv.even_depth == 700);
    CHECK(iv.odd_depth == 699);
    CHECK(iv.lower == doctest::Approx(1.5350874927702947).epsilon(1e-12));
    CHECK(iv.upper == doctest::Approx(2.6791971061186040).epsilon(1e-12));
    // even convergents increase, odd decrease, and lower < upper throughout
    double prev_even = to_double(psi_convergent<double>(tr, 3, 10));
    double prev_odd = to_double(psi_convergent<double>(tr, 3, 11));
    for (long depth = 12; depth <= 120; depth += 2) {
        double even = to_double(psi_convergent<double>(tr, 3, depth));
        double odd = to_double(psi_convergent<double>(tr, 3, depth + 1));
        CHECK(even >= prev_even);
        CHECK(odd <= prev_odd);
        CHECK(even < odd);
        prev_even = even;
        prev_odd = odd;
    }
    CHECK_THROWS_AS(psi_convergents<double>(tr, 3, 1), ScopeError);
    CHECK_THROWS_AS(psi_convergents<double>(srntest::translated("cycle.srn"), 5, 10), ScopeError);
}

TEST_CASE("floor-rate network is certified non-unique with a convergent series") {
    auto tr = srntest::translated("nonunique_floor.srn");
    auto rep = uniqueness_test<double>(tr, 200000, 700);
    CHECK(rep.verdict == "not-unique");
    CHECK(rep.certified);
    CHECK(rep.method == "h-series");
    CHECK(rep.x0 == 3);
    CHECK(rep.tail_exponent == doctest::Approx(2.0).epsilon(0.01));
    // series limit equals pi^2/3 - 1; extrapolated partial sums reach it
    CHECK(rep.h_extrapolated == doctest::Approx(kPiSqOver3Minus1).epsilon(1e-8));
    CHECK(std::abs(rep.h_extrapolated - kPiSqOver3Minus1) < 1e-4);
    CHECK(rep.psi_lower == doctest::Approx(1.5351).epsilon(1e-3));
    CHECK(rep.psi_upper == doctest::Approx(2.6792).epsilon(1e-3));
    CHECK_FALSE(rep.diverged_numerically);
}

TEST_CASE("mass-action networks get the polynomial divergence rule") {
    auto tr = srntest::translated_text("0 -> S @ 10\nS -> 2S @ 1\n2S -> 0 @ 1\n");
    REQUIRE(tr.omega_minus == -2);
    REQUIRE(tr.omega_plus == 1);
    auto rep = uniqueness_test<double>(tr, 5000, 100);
    CHECK(rep.verdict == "unique");
    CHECK(rep.certified);
    CHECK(rep.method == "polynomial-rule");
}

TEST_CASE("skip-free chains are unique without any series work") {
    auto rep = uniqueness_test<double>(srntest::translated("mm_infty.srn"), 100, 10);
    CHECK(rep.verdict == "unique");
    CHECK(rep.certified);
    CHECK(rep.method == "skip-free");
}

TEST_CASE("numerically exploding series yields the heuristic unique verdict") {
    auto tr = srntest::translated("signed_m63.srn");
    auto rep = uniqueness_test<double>(tr, 200000, 700);
    CHECK(rep.verdict == "unique");
    CHECK_FALSE(rep.certified);
    CHECK(rep.method == "h-series-heuristic");
    CHECK(rep.diverged_numerically);
}

TEST_CASE("chains outside the two-down-one-up shape are rejected") {
    CHECK_THROWS_AS(uniqueness_test<double>(srntest::translated("cycle.srn"), 100, 10),
                    ScopeError);
}

TEST_CASE("each admissible phi yields a measure; the recursion inverts it") {
    auto tr = srntest::translated("nonunique_floor.srn");
    set_high_precision(256);
    auto iv = psi_convergents<HighFloat>(tr, tr.U + 2, 700);
    const HighFloat mid = (iv.lower + iv.upper) / 2;
    auto m = measure_from_phi<HighFloat>(tr, mid, 300, false);
    CHECK(m.residual_master < 1e-8);
    CHECK(m.residual_flux < 1e-8);
    CHECK_FALSE(m.instability_onset.has_value());
    CHECK(std::abs(to_double(phi_of_measure<HighFloat>(tr, m.values, tr.U + 2) - mid)) < 1e-40);

    // the lower endpoint also gives a (different) positive measure; both are
    // pinned to 1 at x = U+1, so raw values compare on a common scale
    auto mlow = measure_from_phi<HighFloat>(tr, iv.lower, 300, false);
    CHECK(mlow.residual_master < 1e-8);
    CHECK_FALSE(mlow.instability_onset.has_value());
    double diff = 0;
    for (long x = 3; x <= 20; ++x)
        diff = std::max(diff, std::abs(to_double(m.values[static_cast<size_t>(x)] -
                                                 mlow.values[static_cast<size_t>(x)])));
    CHECK(diff > 1e-4);  // genuinely distinct stationary measures

    // phi below the admissible interval breaks down
    CHECK_THROWS_AS(measure_from_phi<HighFloat>(tr, iv.lower - HighFloat(0.05), 300, false),
                    NumericalError);
}

TEST_CASE("unnormalizable family member grows super-exponentially") {
    // phi* = 2.67 sits inside the admissible interval but below its upper
    // endpoint, so the resulting measure is not summable; its log values on
    // even states follow the reference fit 3.504 + 2.009 s log s - 3.429 s.
    auto tr = srntest::translated("nonunique_floor.srn");
    set_high_precision(512);
    auto m = measure_from_phi<HighFloat>(tr, HighFloat(2.67), 80, false);
    CHECK(to_double(m.values[2]) == doctest::Approx(1.0));
    double worst = 0;
    for (long s = 4; s <= 78; s += 2) {
        const double lg = to_double(log(m.values[static_cast<size_t>(s)]));
        const double fit = 3.504 + 2.009 * s * std::log(double(s)) - 3.429 * s;
        worst = std::max(worst, std::abs(lg - fit));
    }
    CHECK(worst < 0.25);
    // and the normalization machinery refuses it
    auto m2 = measure_from_phi<HighFloat>(tr, HighFloat(2.67), 200, true);
    CHECK_FALSE(m2.normalized);
    CHECK_FALSE(m2.norm_converged);
    set_high_precision(256);
}

TEST_CASE("two-sided generator ratio bounds bracket measures") {
    SUBCASE("unique chain: the bounds pinch to a point") {
        auto tr = srntest::translated("cubic.srn");
        auto t = build_gamma_table<double>(tr, 400);
        auto rb = ratio_bounds(t);
        REQUIRE(rb.has_r1);
        REQUIRE(rb.has_r2);
        CHECK(std::abs(rb.r1 - rb.r2) < 1e-10);
        CHECK(rb.r1 == doctest::Approx(0.7486113240574189 / 0.2513886759425811).epsilon(1e-10));
    }
    SUBCASE("non-unique chain: a genuine gap remains") {
        auto tr = srntest::translated("nonunique_floor.srn");
        set_high_precision(256);
        auto t = build_gamma_table<HighFloat>(tr, 400);
        auto rb = ratio_bounds(t);
        REQUIRE(rb.has_r1);
        REQUIRE(rb.has_r2);
        CHECK(rb.r1 == doctest::Approx(1.372621200609660).epsilon(1e-9));
        CHECK(rb.r2 == doctest::Approx(1.652012983668985).epsilon(1e-9));
        CHECK(rb.r2 - rb.r1 > 0.25);
    }
    SUBCASE("three-column bases are rejected") {
        auto tr = srntest::translated("cycle.srn");
        auto t = build_gamma_table<double>(tr, 60);
        CHECK_THROWS_AS(ratio_bounds(t), ScopeError);
    }
}
