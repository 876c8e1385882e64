#include <doctest.h>

#include "helpers.hpp"

#include <srn/chain.hpp>

using namespace srn;

TEST_CASE("simple open chains form one component covering all states") {
    auto ts = load_network(srntest::network_text("mm_infty.srn"));
    auto c = classify(ts);
    CHECK(c.omega_star == 1);
    REQUIRE(c.pics.size() == 1);
    CHECK(c.pics[0] == 0);
    CHECK(c.neutral.empty());
    CHECK(c.trapping.empty());
    CHECK(c.escaping.empty());
    CHECK(c.qics.empty());
}

TEST_CASE("states below all activation thresholds become neutral") {
    // nothing moves at 0 or 1; the component {2,3,...} cannot reach them
    auto ts = load_network("2S -> 3S @ 1\n3S -> 2S @ 1\n");
    auto c = classify(ts);
    CHECK(c.neutral.lo == 0);
    CHECK(c.neutral.hi == 1);
    CHECK(c.trapping.empty());
    CHECK(c.escaping.empty());
    REQUIRE(c.pics.size() == 1);
    CHECK(c.pics[0] == 2);
    CHECK(default_pic(ts) == 2);
}

TEST_CASE("one-way intermediate states are escaping") {
    // 1 -> 2 is possible but nothing returns below 2
    auto ts = load_network("S -> 2S @ 1\n3S -> 2S @ 1\n");
    auto c = classify(ts);
    CHECK(c.neutral.lo == 0);
    CHECK(c.neutral.hi == 0);
    CHECK(c.escaping.lo == 1);
    CHECK(c.escaping.hi == 1);
    REQUIRE(c.pics.size() == 1);
    CHECK(c.pics[0] == 2);
}

TEST_CASE("accessible absorbing states make the rest a quasi component") {
    auto ts = load_network("S -> 2S @ 1\n2S -> 0 @ 1\n");
    auto c = classify(ts);
    CHECK(c.pics.empty());
    CHECK(c.trapping.lo == 0);
    CHECK(c.trapping.hi == 0);
    CHECK(c.qics.size() == 1);
    CHECK_THROWS_AS(default_pic(ts), ScopeError);
}

TEST_CASE("gcd-2 jump sets split the lattice into two components") {
    auto ts = load_network("0 <-> 2S @ 1, 1\n");
    auto c = classify(ts);
    CHECK(c.omega_star == 2);
    REQUIRE(c.pics.size() == 2);
    CHECK(c.pics[0] == 0);
    CHECK(c.pics[1] == 1);
    CHECK(default_pic(ts) == 0);
    CHECK_THROWS_AS(translate(ts, 2), ScopeError);  // 2 is not a class representative
}

TEST_CASE("translation relabels rates onto the sublattice") {
    auto ts = load_network("0 <-> 2S @ 3, 1\n");
    auto tr = translate(ts, 1);  // odd states 1, 3, 5, ...
    CHECK(tr.omega_star == 2);
    CHECK(tr.s == 1);
    CHECK(tr.omega == std::vector<long>{-1, 1});
    // lambda'_{+1}(x) = lambda_{+2}(2x+1) = 3; lambda'_{-1}(x) = (2x+1)(2x)
    CHECK(tr.lambda<Rational>(1, 0) == Rational(3));
    CHECK(tr.lambda<Rational>(-1, 0) == Rational(0));
    CHECK(tr.lambda<Rational>(-1, 1) == Rational(3 * 2));
    CHECK(tr.lambda<Rational>(-1, 2) == Rational(5 * 4));
    CHECK(tr.threshold(-1) == 1);
    CHECK(tr.L == 0);
    CHECK(tr.U == 0);
    CHECK(tr.d() == 1);
}

TEST_CASE("window bounds follow the most negative translated jump") {
    auto tr = srntest::translated("cycle.srn");  // jumps +2, -1, +2, -3
    CHECK(tr.omega_minus == -3);
    CHECK(tr.omega_plus == 2);
    CHECK(tr.d() == 3);
    CHECK(tr.U - tr.L + 1 == -tr.omega_minus);
    CHECK(tr.m_star == tr.omega_plus - tr.omega_minus - 1);

    auto tr2 = srntest::translated("signed_m63.srn");
    CHECK(tr2.L == 0);
    CHECK(tr2.U == 1);
    CHECK(tr2.omega_minus == -2);
    CHECK(tr2.omega_plus == 1);
    CHECK(tr2.m_star == 2);
}

TEST_CASE("component minima shift the translated threshold data") {
    auto ts = load_network("2S -> 3S @ 1\n3S -> 2S @ 1\n");
    auto tr = translate(ts, 2);
    CHECK(tr.s == 2);
    CHECK(tr.omega_star == 1);
    // at translated x the original state is x + 2
    CHECK(tr.lambda<Rational>(1, 0) == Rational(2 * 1));
    CHECK(tr.lambda<Rational>(-1, 1) == Rational(3 * 2 * 1));
    CHECK(tr.threshold(1) == 0);
    CHECK(tr.total_rate<Rational>(0) == Rational(2));
}
