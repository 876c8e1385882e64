#include <doctest.h>

#include "helpers.hpp"

#include <srn/closed.hpp>

#include <cmath>

using namespace srn;

TEST_CASE("birth-death product form gives the Poisson measure exactly") {
    auto tr = srntest::translated("mm_infty.srn");  // 0 <-> S at rates 2, 1
    auto m = birth_death_measure<Rational>(tr, 20, false);
    Rational fact(1);
    for (long x = 0; x <= 20; ++x) {
        if (x > 0) fact *= x;
        CHECK(m.values[static_cast<size_t>(x)] == scalar_ipow(Rational(2), x) / fact);
    }
    auto rep = residual_report(tr, m.values);
    CHECK(rep.master_exact_zero);

    auto mn = birth_death_measure<double>(tr, 60, true);
    CHECK(mn.normalized);
    CHECK(mn.norm_converged);
    double sum = 0;
    for (double v : mn.values) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mn.values[0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(mn.values[2] == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-12));
    CHECK(mn.residual_master < 1e-14);
}

TEST_CASE("birth-death form is rejected off the two-jump lattice") {
    CHECK_THROWS_AS(birth_death_measure<double>(srntest::translated("cubic.srn"), 30, false),
                    ScopeError);
}

TEST_CASE("single-sequence form matches the product form when both apply") {
    auto tr = srntest::translated_text("0 -> S @ 3\nS -> 0 @ 1\n");
    auto a = birth_death_measure<Rational>(tr, 40, false);
    auto b = downward_skipfree_measure<Rational>(tr, 40, false);
    for (long x = 0; x <= 40; ++x)
        CHECK(a.values[static_cast<size_t>(x)] == b.values[static_cast<size_t>(x)]);

    // applies beyond birth-death: minimal jump -1 with a +2 jump present
    auto tr2 = srntest::translated_text("0 -> 2S @ 1\nS -> 0 @ 1\n");
    auto m2 = downward_skipfree_measure<Rational>(tr2, 50, false);
    auto rep = residual_report(tr2, m2.values);
    CHECK(rep.master_exact_zero);
    CHECK_THROWS_AS(downward_skipfree_measure<Rational>(srntest::translated("cycle.srn"), 30, false),
                    ScopeError);
}

TEST_CASE("generating-function equation renders with merged polynomial weights") {
    auto ts = load_network(srntest::network_text("ex53_121.srn"));
    CHECK(pgf_ode(ts).rendered ==
          "(1 - z^2)*g''(z) + (-2*z + 2*z^2)*g'(z) + (-1 + z)*g(z) = 0");
    auto ts2 = load_network(srntest::network_text("mm_infty.srn"));
    CHECK(pgf_ode(ts2).rendered == "(1 - z)*g'(z) + (-2 + 2*z)*g(z) = 0");
    // every merged coefficient polynomial vanishes at z = 1
    for (const auto& term : pgf_ode(ts).terms) {
        Rational at_one(0);
        for (const auto& c : term.poly) at_one += c;
        CHECK(at_one == Rational(0));
    }
    CHECK_THROWS_AS(pgf_ode(load_network(srntest::network_text("nonunique_floor.srn"))),
                    ScopeError);
}

TEST_CASE("confluent hypergeometric series matches reference identities") {
    // 1F1(a; a; z) = e^z
    CHECK(kummer_1f1<double>(3.0, 3.0, 1.7) == doctest::Approx(std::exp(1.7)).epsilon(1e-14));
    // 1F1(1; 2; z) = (e^z - 1)/z
    CHECK(kummer_1f1<double>(1.0, 2.0, 1.5) ==
          doctest::Approx((std::exp(1.5) - 1.0) / 1.5).epsilon(1e-14));
    // Kummer transform: 1F1(a; b; z) = e^z 1F1(b-a; b; -z)
    CHECK(kummer_1f1<double>(0.5, 2.0, 0.8) ==
          doctest::Approx(std::exp(0.8) * kummer_1f1<double>(1.5, 2.0, -0.8)).epsilon(1e-13));
    CHECK_THROWS_AS(kummer_1f1<double>(1.0, -2.0, 1.0), NumericalError);
}

TEST_CASE("bursty network closed form collapses to Poisson on the balance line") {
    struct Triple { double k1, k2, k3; };
    for (auto [k1, k2, k3] : {Triple{1, 1, 1}, Triple{4, 2, 1}, Triple{1, 2, 4}}) {
        REQUIRE(k1 * k3 == doctest::Approx(k2 * k2));
        const double lam = k1 / k2;
        auto m = example53_closed_form<double>(k1, k2, k3, 30);
        double ref = std::exp(-lam);
        for (long x = 0; x <= 30; ++x) {
            CHECK(to_double(m.values[static_cast<size_t>(x)]) ==
                  doctest::Approx(ref).epsilon(1e-10));
            ref *= lam / double(x + 1);
        }
        auto [g0, g1] = example53_boundary<double>(k1, k2, k3);
        CHECK(g0 == doctest::Approx(std::exp(-lam)).epsilon(1e-12));
        CHECK(g1 == doctest::Approx(lam * std::exp(-lam)).epsilon(1e-12));
    }
}

TEST_CASE("bursty network closed form solves the master equation off the line") {
    auto tr = srntest::translated("ex53_121.srn");  // k = (1,2,1): not Poisson
    auto m = example53_closed_form<double>(1.0, 2.0, 1.0, 80);
    auto rep = master_residual_base(tr, m.values);
    CHECK(rep.max_master < 1e-12);
    double sum = 0;
    for (double v : m.values) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_FALSE(m.instability_onset.has_value());
    CHECK_THROWS_AS((example53_closed_form<double>(0.0, 1.0, 1.0, 10)), ScopeError);
}
