#include <doctest.h>

#include "helpers.hpp"

#include <srn/qp.hpp>
#include <srn/smallmat.hpp>
#include <srn/solve.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

using namespace srn;

namespace {

// Brute-force oracle: enumerate candidate active sets among the inequality
// constraints (bounds v_j >= 0 and the extra rows), solve the
// equality-constrained minimum-norm problem for each, and keep the best
// candidate that is primal and dual feasible.
struct OracleResult {
    bool feasible = false;
    std::vector<double> v;
};

OracleResult enumerate_qp(int d, const std::vector<std::vector<double>>& rows) {
    const int n_ineq = d + static_cast<int>(rows.size());
    auto normal = [&](int c) {
        std::vector<double> a(static_cast<size_t>(d), 0.0);
        if (c < d)
            a[static_cast<size_t>(c)] = 1.0;
        else
            a = rows[static_cast<size_t>(c - d)];
        return a;
    };

    OracleResult best;
    double best_obj = 0;
    std::vector<int> subset;
    // all subsets of inequalities with |S| <= d-1 (plus the equality row)
    std::vector<std::vector<int>> subsets{{}};
    for (int size = 1; size <= d - 1; ++size) {
        std::vector<int> idx(static_cast<size_t>(size));
        std::function<void(int, int)> rec = [&](int start, int k) {
            if (k == size) {
                subsets.emplace_back(idx);
                return;
            }
            for (int c = start; c < n_ineq; ++c) {
                idx[static_cast<size_t>(k)] = c;
                rec(c + 1, k + 1);
            }
        };
        rec(0, 0);
    }

    for (const auto& S : subsets) {
        const int na = 1 + static_cast<int>(S.size());
        std::vector<std::vector<double>> A(static_cast<size_t>(na), std::vector<double>(static_cast<size_t>(d), 1.0));
        std::vector<double> b(static_cast<size_t>(na), 0.0);
        b[0] = 1.0;
        for (size_t k = 0; k < S.size(); ++k) A[k + 1] = normal(S[k]);

        // v = A^T (A A^T)^{-1} b ; multipliers lambda = (A A^T)^{-1} b
        Mat<double> M(na, na);
        for (int i = 0; i < na; ++i)
            for (int j = 0; j < na; ++j) {
                double s = 0;
                for (int t = 0; t < d; ++t)
                    s += A[static_cast<size_t>(i)][static_cast<size_t>(t)] * A[static_cast<size_t>(j)][static_cast<size_t>(t)];
                M(i, j) = s;
            }
        if (pivot_rcond(M) < 1e-10) continue; // dependent active set
        std::vector<double> lam;
        try {
            lam = solve_linear(M, b);
        } catch (const NumericalError&) {
            continue;
        }
        std::vector<double> v(static_cast<size_t>(d), 0.0);
        for (int t = 0; t < d; ++t)
            for (int i = 0; i < na; ++i)
                v[static_cast<size_t>(t)] += lam[static_cast<size_t>(i)] * A[static_cast<size_t>(i)][static_cast<size_t>(t)];

        // dual feasibility (inequality multipliers >= 0)
        bool ok = true;
        for (size_t k = 0; k < S.size(); ++k)
            if (lam[k + 1] < -1e-9) ok = false;
        // primal feasibility of everything
        for (int c = 0; ok && c < n_ineq; ++c) {
            auto a = normal(c);
            double s = 0;
            for (int t = 0; t < d; ++t) s += a[static_cast<size_t>(t)] * v[static_cast<size_t>(t)];
            if (s < -1e-9) ok = false;
        }
        if (!ok) continue;
        double obj = 0;
        for (double x : v) obj += x * x;
        if (!best.feasible || obj < best_obj - 1e-12) {
            best.feasible = true;
            best.v = v;
            best_obj = obj;
        }
    }
    return best;
}

} // namespace

TEST_CASE("with no extra rows the minimum-norm point is uniform") {
    for (int d = 1; d <= 5; ++d) {
        QpProblem p;
        p.d = d;
        auto sol = solve_simplex_qp(p);
        REQUIRE(static_cast<int>(sol.v.size()) == d);
        for (double x : sol.v) CHECK(x == doctest::Approx(1.0 / d).epsilon(1e-13));
        CHECK(sol.kkt_residual < 1e-12);
        CHECK(sol.active_count == 1); // only the sum constraint binds
    }
}

TEST_CASE("two-dimensional problems match the closed-form interval answer") {
    std::mt19937 rng(777u);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    int feasible_seen = 0, infeasible_seen = 0;
    for (int trial = 0; trial < 300; ++trial) {
        QpProblem p;
        p.d = 2;
        const int n_rows = static_cast<int>(rng() % 4); // 0..3
        for (int r = 0; r < n_rows; ++r) p.ineq_rows.push_back({unif(rng), unif(rng)});

        // v = (t, 1-t), t in [t_lo, t_hi]; each row a: t*(a0-a1) >= -a1.
        double t_lo = 0.0, t_hi = 1.0;
        bool infeasible = false;
        for (const auto& a : p.ineq_rows) {
            const double g = a[0] - a[1];
            if (std::abs(g) < 1e-12) {
                if (a[1] < -1e-12) infeasible = true;
                continue;
            }
            const double bound = -a[1] / g;
            if (g > 0)
                t_lo = std::max(t_lo, bound);
            else
                t_hi = std::min(t_hi, bound);
        }
        if (t_lo > t_hi + 1e-9) infeasible = true;
        if (std::abs(t_lo - t_hi) < 1e-7 && !infeasible) continue; // skip knife-edge draws

        if (infeasible) {
            CHECK_THROWS_AS(solve_simplex_qp(p), NumericalError);
            ++infeasible_seen;
            continue;
        }
        auto sol = solve_simplex_qp(p);
        const double t_star = std::clamp(0.5, t_lo, t_hi);
        CHECK(sol.v[0] == doctest::Approx(t_star).epsilon(1e-9));
        CHECK(sol.v[1] == doctest::Approx(1.0 - t_star).epsilon(1e-9));
        CHECK(sol.kkt_residual < 1e-10);
        ++feasible_seen;
    }
    CHECK(feasible_seen > 150);
    CHECK(infeasible_seen > 5);
}

TEST_CASE("three-dimensional problems match active-set enumeration") {
    std::mt19937 rng(4242u);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    int compared = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 3;
        QpProblem p;
        p.d = d;
        const int n_rows = 1 + static_cast<int>(rng() % 4); // 1..4
        for (int r = 0; r < n_rows; ++r) {
            std::vector<double> row(static_cast<size_t>(d));
            for (auto& x : row) x = unif(rng);
            p.ineq_rows.push_back(std::move(row));
        }
        auto oracle = enumerate_qp(d, p.ineq_rows);
        if (!oracle.feasible) {
            CHECK_THROWS_AS(solve_simplex_qp(p), NumericalError);
            continue;
        }
        auto sol = solve_simplex_qp(p);
        CHECK(sol.kkt_residual < 1e-10);
        for (int j = 0; j < d; ++j)
            CHECK(sol.v[static_cast<size_t>(j)] == doctest::Approx(oracle.v[static_cast<size_t>(j)]).epsilon(1e-8));
        ++compared;
    }
    CHECK(compared > 120);
}

TEST_CASE("cubic chain: frozen coefficients, guard, and norm growth") {
    auto t = build_gamma_table<double>(srntest::translated("cubic.srn"), 60);

    SUBCASE("tiny horizon has no binding rows") {
        auto q = qp_generator(t, 2);
        CHECK(q.v[0] == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(q.v[1] == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(q.method == "qp");
    }
    SUBCASE("frozen horizon-18 solution agrees with the linear scheme") {
        auto q = qp_generator(t, 18);
        CHECK(q.v[0] == doctest::Approx(0.25138879469146269).epsilon(1e-12));
        CHECK(q.v[1] == doctest::Approx(0.74861120530853731).epsilon(1e-12));
        CHECK(q.kkt_residual < 1e-12);
        auto l = linear_scheme(t, 25);
        const double diff = std::max(std::abs(q.v[0] - to_double(l.v[0])), std::abs(q.v[1] - to_double(l.v[1])));
        CHECK(diff < 1e-6);
        CHECK(diff == doctest::Approx(1.1874888161678143e-07).epsilon(1e-4));
    }
    SUBCASE("squared norm never decreases as rows accumulate") {
        double prev = -1.0;
        for (long n = t.U + 1; n <= 18; ++n) {
            auto q = qp_generator(t, n);
            double nr = 0;
            for (double x : q.v) nr += x * x;
            CHECK(nr >= prev - 1e-12);
            prev = nr;
        }
    }
    SUBCASE("the precision guard refuses once basis growth eats the mantissa") {
        CHECK_NOTHROW(qp_generator(t, 20));
        CHECK_THROWS_AS(qp_generator(t, 21), NumericalError);
        CHECK_THROWS_AS(qp_generator(t, 30), NumericalError);
        CHECK_THROWS_AS(qp_generator(t, 0), ScopeError); // below U+1
    }
}

TEST_CASE("one-column chains give the trivial answer") {
    auto t = build_gamma_table<double>(srntest::translated("mm_infty.srn"), 40);
    auto q = qp_generator(t, 20);
    REQUIRE(q.v.size() == 1);
    CHECK(q.v[0] == 1.0);
    CHECK(q.kkt_residual == 0.0);
}

TEST_CASE("high-precision tables: rows are honored regardless of magnitude") {
    SUBCASE("geometric-over-factorial chain") {
        auto tr = srntest::translated("signed_m63.srn");
        set_high_precision(256);
        auto t = build_gamma_table<HighFloat>(tr, 220);
        auto q = qp_generator(t, 200);
        auto l = linear_scheme(t, 200);
        CHECK(q.v[0] == doctest::Approx(to_double(l.v[0])).epsilon(1e-12));
        CHECK(q.v[1] == doctest::Approx(to_double(l.v[1])).epsilon(1e-12));
        CHECK(q.v[0] == doctest::Approx(0.75801200096734123).epsilon(1e-10));
        CHECK(q.kkt_residual < 1e-12);
    }
    SUBCASE("explosive chain at 512 bits") {
        auto tr = srntest::translated("explosive.srn");
        set_high_precision(512);
        auto t = build_gamma_table<HighFloat>(tr, 250);
        auto q = qp_generator(t, 250);
        auto l = linear_scheme(t, 250);
        double diff = 0;
        for (size_t j = 0; j < q.v.size(); ++j)
            diff = std::max(diff, std::abs(q.v[j] - to_double(l.v[j])));
        CHECK(diff < 1e-10);
        CHECK(q.kkt_residual < 1e-10);
    }
}
