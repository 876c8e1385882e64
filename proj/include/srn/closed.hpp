#pragma once
// Closed-form stationary measures for the chain families that admit them:
// birth-death products, downwardly skip-free chains (single basis sequence),
// the generating-function ODE for mass-action rates, and the hypergeometric
// solution of the three-reaction bursty birth-death network
// 0 -> S -> 2S -> 0.

#include <srn/measure.hpp>

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace srn {

namespace detail {

// Extend `vals` by repeatedly appending next(x) and doubling the horizon
// until the partial-sum tail test passes or the cap is reached.
template <class T, class NextFn>
TailTest<T> extended_tail_total(std::vector<T> vals, NextFn next, long cap, double rel_tol) {
    auto tt = partial_sum_tail_test(vals, rel_tol);
    while (!tt.converged && static_cast<long>(vals.size()) < cap) {
        long target = std::min<long>(cap, 2 * static_cast<long>(vals.size()));
        for (long x = static_cast<long>(vals.size()); x < target; ++x)
            vals.push_back(next(x));
        tt = partial_sum_tail_test(vals, rel_tol);
    }
    return tt;
}

template <class T>
long extension_cap(long n_max) {
    const long floor_cap = scalar_traits<T>::is_exact ? (1L << 14) : (1L << 20);
    return std::max(floor_cap, 4 * (n_max + 1));
}

} // namespace detail

// Classical birth-death chain, Omega = {-1, +1}:
//   pi(l) = pi(0) * prod_{j=1}^{l} lambda_{+1}(j-1) / lambda_{-1}(j).
template <class T>
MeasureSeries<T> birth_death_measure(const TranslatedSystem& tr, long n_max, bool normalize) {
    if (tr.omega != std::vector<long>{-1, 1})
        throw ScopeError("birth-death form requires jump set {-1, +1}");
    MeasureSeries<T> m;
    m.pic = tr.s;
    m.omega_star = tr.omega_star;
    m.n_max = n_max;
    m.provenance = "closed birth-death product";
    m.values.resize(static_cast<size_t>(n_max) + 1);
    m.values[0] = T(1);
    for (long x = 1; x <= n_max; ++x) {
        T dn = tr.lambda<T>(-1, x);
        if (!(dn > T(0))) throw AssumptionError("down rate vanishes above its threshold");
        m.values[static_cast<size_t>(x)] =
            m.values[static_cast<size_t>(x - 1)] * tr.lambda<T>(1, x - 1) / dn;
    }
    if (normalize) {
        T prev = m.values.back();
        auto next = [&](long x) {
            T dn = tr.lambda<T>(-1, x);
            if (!(dn > T(0))) throw AssumptionError("down rate vanishes above its threshold");
            prev = prev * tr.lambda<T>(1, x - 1) / dn;
            return prev;
        };
        auto tt = detail::extended_tail_total<T>(m.values, next, detail::extension_cap<T>(n_max), 1e-14);
        m.norm_constant = tt.total;
        m.norm_horizon = tt.horizon;
        m.norm_converged = tt.converged;
        if (tt.converged && to_double(tt.total) > 0.0) {
            for (auto& v : m.values) v /= tt.total;
            m.normalized = true;
        }
    }
    detect_instability_onset(m);
    attach_residuals(tr, m);
    return m;
}

// Downwardly skip-free chain (omega_minus = -1, so L = U = 0): the measure is
// the single basis sequence, pi(l) = pi(0) * gamma_0(l).
template <class T>
MeasureSeries<T> downward_skipfree_measure(const TranslatedSystem& tr, long n_max, bool normalize) {
    if (tr.omega_minus != -1)
        throw ScopeError("skip-free form requires minimal jump -1");
    auto table = build_gamma_table<T>(tr, n_max);
    MeasureSeries<T> m;
    m.pic = tr.s;
    m.omega_star = tr.omega_star;
    m.n_max = n_max;
    m.provenance = "closed skip-free recursion";
    m.values.resize(static_cast<size_t>(n_max) + 1);
    for (long ell = 0; ell <= n_max; ++ell) m.values[static_cast<size_t>(ell)] = table.gamma(ell, 0);
    if (normalize) {
        auto tt = partial_sum_tail_test(m.values, 1e-14);
        long horizon = n_max;
        const long cap = detail::extension_cap<T>(n_max);
        while (!tt.converged && horizon < cap) {
            horizon = std::min(cap, 2 * horizon + 1);
            auto wide = build_gamma_table<T>(tr, horizon);
            std::vector<T> vals(static_cast<size_t>(horizon) + 1);
            for (long ell = 0; ell <= horizon; ++ell) vals[static_cast<size_t>(ell)] = wide.gamma(ell, 0);
            tt = partial_sum_tail_test(vals, 1e-14);
        }
        m.norm_constant = tt.total;
        m.norm_horizon = tt.horizon;
        m.norm_converged = tt.converged;
        if (tt.converged && to_double(tt.total) > 0.0) {
            for (auto& v : m.values) v /= tt.total;
            m.normalized = true;
        }
    }
    detect_instability_onset(m);
    attach_residuals(tr, m);
    return m;
}

// ---------------------------------------------------------------------------
// Generating-function ODE for mass-action rates.
//
// Each contribution kappa * x^(y) (falling factorial, source size y, target
// size y') adds the term kappa * (z^{y'} - z^y) * g^{(y)}(z); terms are merged
// by derivative order.  Every merged polynomial vanishes at z = 1.
// ---------------------------------------------------------------------------

struct PgfOdeTerm {
    long order = 0;              // derivative order of g
    std::vector<Rational> poly;  // coefficient polynomial in z, ascending powers
};

struct PgfOde {
    std::vector<PgfOdeTerm> terms; // sorted by descending order
    std::string rendered;          // human-readable equation "... = 0"
};

inline std::string render_rational_coeff(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

inline std::string render_poly(const std::vector<Rational>& poly) {
    std::ostringstream os;
    bool first = true;
    for (size_t p = 0; p < poly.size(); ++p) {
        const Rational& c = poly[p];
        if (c == 0) continue;
        Rational a = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        const bool unit = (a == 1);
        if (p == 0) {
            os << render_rational_coeff(a);
        } else {
            if (!unit) os << render_rational_coeff(a) << "*";
            os << "z";
            if (p > 1) os << "^" << p;
        }
    }
    if (first) os << "0";
    return os.str();
}

inline std::string derivative_mark(long order) {
    if (order == 0) return "g(z)";
    if (order <= 3) return "g" + std::string(static_cast<size_t>(order), '\'') + "(z)";
    return "g^(" + std::to_string(order) + ")(z)";
}

inline PgfOde pgf_ode(const TransitionSystem& ts) {
    if (ts.has_expression_rates)
        throw ScopeError("generating-function form requires mass-action rates");
    std::map<long, std::vector<Rational>> by_order;
    for (const auto& [w, list] : ts.contribs) {
        for (const auto& c : list) {
            const long y = c.y;
            const long yp = y + w;
            auto& poly = by_order[y];
            const size_t need = static_cast<size_t>(std::max(y, yp)) + 1;
            if (poly.size() < need) poly.resize(need, Rational(0));
            poly[static_cast<size_t>(yp)] += c.kappa;
            poly[static_cast<size_t>(y)] -= c.kappa;
        }
    }
    PgfOde ode;
    for (auto it = by_order.rbegin(); it != by_order.rend(); ++it) {
        Rational at_one(0);
        for (const auto& c : it->second) at_one += c;
        if (!(at_one == 0))
            throw InternalError("generating-function coefficient does not vanish at z=1");
        ode.terms.push_back(PgfOdeTerm{it->first, it->second});
    }
    std::ostringstream os;
    bool first = true;
    for (const auto& t : ode.terms) {
        if (!first) os << " + ";
        first = false;
        os << "(" << render_poly(t.poly) << ")*" << derivative_mark(t.order);
    }
    os << " = 0";
    ode.rendered = os.str();
    return ode;
}

// ---------------------------------------------------------------------------
// Kummer's confluent hypergeometric function 1F1(a; b; z), direct series.
// ---------------------------------------------------------------------------

template <class T>
T kummer_1f1(T a, T b, T z) {
    static_assert(!scalar_traits<T>::is_exact,
                  "hypergeometric series requires a floating-point backend");
    using std::abs;
    using std::floor;
    if (b <= T(0) && abs(b - floor(b)) < T(1e-12))
        throw NumericalError("1F1 undefined: second parameter is a nonpositive integer");
    T term(1), sum(1);
    int quiet = 0;
    const long cap = 100000;
    for (long n = 0; n < cap; ++n) {
        term *= (a + T(n)) * z / ((b + T(n)) * T(n + 1));
        sum += term;
        if (abs(term) <= T(1e-16) * abs(sum)) {
            if (++quiet >= 10) return sum;
        } else {
            quiet = 0;
        }
    }
    throw NumericalError("1F1 series did not converge within 100000 terms");
}

// ---------------------------------------------------------------------------
// Closed form for the network 0 ->(k1) S ->(k2) 2S ->(k3) 0.
//
// With a = k1/k2, b = k2/k3:
//   pi(x) = (b^x / x!) * [G(b)/G(a)] * [G(x+a)/G(x+b)]
//           * 1F1(x+a; x+b; b) / 1F1(a; b; 2b),
// a stationary distribution (it sums to one).  When a = b (k1*k3 = k2^2) this
// collapses to the Poisson distribution with mean a.  The generating function
// g satisfies g(0) = pi(0) and g'(0) = pi(1), recovering the generator
// (pi(0), pi(1)) for the basis sequences of the L = 0, U = 1 window.
// ---------------------------------------------------------------------------

template <class T>
MeasureSeries<T> example53_closed_form(T k1, T k2, T k3, long n_max) {
    static_assert(!scalar_traits<T>::is_exact,
                  "closed form requires a floating-point backend");
    using std::abs;
    using std::exp;
    using std::lgamma;
    using std::log;
    if (!(k1 > T(0) && k2 > T(0) && k3 > T(0)))
        throw ScopeError("closed form requires three positive rate constants");
    const T a = k1 / k2;
    const T b = k2 / k3;
    const T denom = kummer_1f1<T>(a, b, T(2) * b);
    const T lg_pref = lgamma(b) - lgamma(a);
    MeasureSeries<T> m;
    m.n_max = n_max;
    m.normalized = true;
    m.norm_converged = true;
    const bool poisson = abs(to_double(a - b)) <= 1e-14 * (std::abs(to_double(a)) + std::abs(to_double(b)));
    m.provenance = poisson ? "closed hypergeometric (poisson)" : "closed hypergeometric";
    m.values.resize(static_cast<size_t>(n_max) + 1);
    for (long x = 0; x <= n_max; ++x) {
        const T tx(x);
        const T lg = lg_pref + lgamma(tx + a) - lgamma(tx + b) - lgamma(tx + T(1)) + tx * log(b);
        m.values[static_cast<size_t>(x)] = exp(lg) * kummer_1f1<T>(tx + a, tx + b, b) / denom;
    }
    detect_instability_onset(m);
    return m;
}

// Boundary data (pi(0), pi(1)) of the same closed form, used as a generator.
template <class T>
std::pair<T, T> example53_boundary(T k1, T k2, T k3) {
    const T a = k1 / k2;
    const T b = k2 / k3;
    const T denom = kummer_1f1<T>(a, b, T(2) * b);
    const T g0 = kummer_1f1<T>(a, b, b) / denom;
    const T g1 = a * kummer_1f1<T>(a + T(1), b + T(1), b) / denom;
    return {g0, g1};
}

} // namespace srn
