#pragma once
// Continued-fraction analysis for chains with translated jumps in {-2,-1,+1}
// (minimal jump -2, maximal +1, so the window has two basis sequences).
// Provides the ratio function h, the even/odd convergents of the associated
// continued fraction, a uniqueness test built on the divergence criterion for
// its equivalent standard continued fraction, the one-parameter family of
// measures indexed by phi, and two-sided bounds on pi(U)/pi(L) read off the
// sign pattern of the basis sequences.

#include <srn/measure.hpp>

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace srn {

inline void require_upskip(const TranslatedSystem& tr) {
    if (tr.omega_minus != -2 || tr.omega_plus != 1)
        throw ScopeError("continued-fraction analysis requires translated jumps {-2[,-1],+1}");
}

// h(x) = (l_{-1}(x-1)+l_{-2}(x-1)) * (l_{-1}(x)+l_{-2}(x))
//        / (l_{+1}(x-1) * l_{-2}(x)),  defined for x >= U+2.
template <class T>
T h_fun(const TranslatedSystem& tr, long x) {
    if (x < tr.U + 2) throw InternalError("h is defined for x >= U+2 only");
    const T down_prev = tr.lambda<T>(-1, x - 1) + tr.lambda<T>(-2, x - 1);
    const T down_here = tr.lambda<T>(-1, x) + tr.lambda<T>(-2, x);
    const T den = tr.lambda<T>(1, x - 1) * tr.lambda<T>(-2, x);
    if (!(den > T(0)))
        throw AssumptionError("rate product vanishes at x=" + std::to_string(x) +
                              "; continued fraction undefined");
    return down_prev * down_here / den;
}

// k-th convergent psi(x, k): backward recursion from psi(x+k, 0) = h(x+k).
template <class T>
T psi_convergent(const TranslatedSystem& tr, long x, long depth) {
    if (depth < 0) throw InternalError("negative convergent depth");
    T v = h_fun<T>(tr, x + depth);
    for (long j = depth - 1; j >= 0; --j) v = h_fun<T>(tr, x + j) * (T(1) + T(1) / v);
    return v;
}

// Even convergents increase to Psi_2 (lower), odd convergents decrease to
// Psi_1 (upper); a positive solution with phi(x) = phi* exists iff
// Psi_2(x) <= phi* <= Psi_1(x).
template <class T>
struct PsiInterval {
    T lower = T(0), upper = T(0);
    long even_depth = 0, odd_depth = 0;
};

template <class T>
PsiInterval<T> psi_convergents(const TranslatedSystem& tr, long x, long depth) {
    require_upskip(tr);
    if (depth < 2) throw ScopeError("convergent depth must be at least 2");
    PsiInterval<T> r;
    r.even_depth = depth - (depth % 2);
    r.odd_depth = r.even_depth - 1;
    r.lower = psi_convergent<T>(tr, x, r.even_depth);
    r.upper = psi_convergent<T>(tr, x, r.odd_depth);
    return r;
}

// ---------------------------------------------------------------------------
// Uniqueness: the continued fraction converges (measure unique up to scale)
// iff sum a_n diverges, where
//   a_{2n}   = h(x+2n+1) * prod_{i<=n} h(x+2i)/h(x+2i+1),
//   a_{2n+1} = prod_{i<=n} h(x+2i+1)/h(x+2i),       at x = U+2.
// Terms are accumulated in log space.  Mass-action rates are polynomial, for
// which divergence is guaranteed; that is the only certified "unique" path.
// A numerically convergent series (fitted tail exponent p >= 1.5) certifies
// "not unique" together with a power-law tail estimate of the limit.
// ---------------------------------------------------------------------------

struct UniquenessReport {
    std::string verdict; // "unique" | "not-unique" | "indeterminate"
    bool certified = false;
    std::string method; // "skip-free" | "polynomial-rule" | "h-series" | "h-series-heuristic"
    std::string note;
    long x0 = 0;
    long terms_requested = 0;
    long terms_evaluated = 0;
    double h_partial = 0.0;
    double h_extrapolated = 0.0;
    double tail_exponent = 0.0;
    bool diverged_numerically = false;
    double psi_lower = 0.0, psi_upper = 0.0;
    long psi_depth = 0;
    // One row per term pair: n, partial sum after the pair, and the running
    // product Q_n of up/down rate ratios.
    std::vector<std::array<double, 3>> trace;
};

namespace detail {

// Least-squares slope of log a_n against log n over the last quarter.
inline double fitted_tail_exponent(const std::vector<double>& log_a) {
    const long n = static_cast<long>(log_a.size());
    const long lo = (3 * n) / 4;
    if (n - lo < 8) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long cnt = 0;
    for (long i = lo; i < n; ++i) {
        const double x = std::log(static_cast<double>(i + 1));
        const double y = log_a[static_cast<size_t>(i)];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    const double denom = cnt * sxx - sx * sx;
    if (denom == 0) return 0.0;
    const double slope = (cnt * sxy - sx * sy) / denom;
    return -slope;
}

} // namespace detail

template <class T>
UniquenessReport uniqueness_test(const TranslatedSystem& tr, long terms, long psi_depth) {
    UniquenessReport rep;
    rep.terms_requested = terms;
    if (tr.omega_minus == -1) {
        rep.verdict = "unique";
        rep.certified = true;
        rep.method = "skip-free";
        rep.note = "minimal jump -1: the measure is a single product sequence";
        return rep;
    }
    if (tr.omega_minus != -2 || tr.omega_plus != 1)
        throw ScopeError("not upwardly skip-free; no uniqueness test available");
    rep.x0 = tr.U + 2;

    // Partial sums of a_n in log space, double precision.
    std::vector<double> log_a;
    log_a.reserve(static_cast<size_t>(terms));
    double partial = 0.0;
    double plog = 0.0; // log prod h(x0+2i)/h(x0+2i+1), i <= n
    double qlog = 0.0; // log Q_n: prod of up/down rate ratios
    long n_pairs = (terms + 1) / 2;
    bool overflowed = false;
    auto lam = [&](long w, long x) { return to_double(tr.lambda<double>(w, x)); };
    for (long n = 0; n < n_pairs && static_cast<long>(log_a.size()) < terms; ++n) {
        const double h_even = to_double(h_fun<double>(tr, rep.x0 + 2 * n));
        const double h_odd = to_double(h_fun<double>(tr, rep.x0 + 2 * n + 1));
        if (!std::isfinite(h_even) || !std::isfinite(h_odd) || h_even <= 0 || h_odd <= 0) {
            overflowed = true;
            break;
        }
        plog += std::log(h_even) - std::log(h_odd);
        qlog += std::log(lam(1, rep.x0 + 2 * n - 1)) + std::log(lam(-2, rep.x0 + 2 * n)) -
                std::log(lam(1, rep.x0 + 2 * n)) - std::log(lam(-2, rep.x0 + 2 * n + 1));
        const double la_even = std::log(h_odd) + plog;
        const double la_odd = -plog;
        for (double la : {la_even, la_odd}) {
            if (static_cast<long>(log_a.size()) >= terms) break;
            if (la > 690.0) { // exp would overflow
                overflowed = true;
                break;
            }
            log_a.push_back(la);
            partial += std::exp(la);
        }
        rep.trace.push_back({static_cast<double>(n), partial, std::exp(qlog)});
        if (overflowed || partial > 1e15) break;
    }
    rep.terms_evaluated = static_cast<long>(log_a.size());
    rep.h_partial = partial;
    rep.h_extrapolated = partial;
    rep.diverged_numerically = overflowed || partial > 1e15;
    rep.tail_exponent = detail::fitted_tail_exponent(log_a);
    if (!rep.diverged_numerically && rep.tail_exponent > 1.05 && !log_a.empty()) {
        const double n_last = static_cast<double>(log_a.size());
        rep.h_extrapolated = partial + std::exp(log_a.back()) * n_last / (rep.tail_exponent - 1.0);
    }

    const bool mass_action = !tr.base->has_expression_rates;
    if (mass_action) {
        rep.verdict = "unique";
        rep.certified = true;
        rep.method = "polynomial-rule";
        rep.note = "mass-action rates are polynomial, so the term series diverges";
    } else if (rep.diverged_numerically || rep.tail_exponent < 0.9) {
        rep.verdict = "unique";
        rep.certified = false;
        rep.method = "h-series-heuristic";
        rep.note = rep.diverged_numerically
                       ? "partial sums grow beyond numerical range"
                       : "observed terms decay too slowly for a convergent series";
    } else if (rep.tail_exponent >= 1.5) {
        rep.verdict = "not-unique";
        rep.certified = true;
        rep.method = "h-series";
        rep.note = "term series convergent with fitted tail exponent >= 1.5";
    } else {
        rep.verdict = "indeterminate";
        rep.certified = false;
        rep.method = "h-series";
        rep.note = "fitted tail exponent in the ambiguous band [0.9, 1.5)";
    }

    if (psi_depth >= 2) {
        try {
            auto psi = psi_convergents<T>(tr, rep.x0, psi_depth);
            rep.psi_lower = to_double(psi.lower);
            rep.psi_upper = to_double(psi.upper);
            rep.psi_depth = psi.even_depth;
        } catch (const Error&) {
            // convergents unavailable (e.g. rate overflow); series verdict stands
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// One-parameter family of measures: pick phi(U+2) = phi* in [Psi2, Psi1];
//   phi(x+1) = h(x) / (phi(x) - h(x)),
//   pi(x)    = pi(U+1) prod_{j=U+1}^{x-1} (l_{-1}(j)+l_{-2}(j)) / (l_{-2}(j+1) phi(j+1)),
// and for x <= U the downward recursion
//   pi(x) = [pi(x+1)(l_{-1}+l_{-2})(x+1) + pi(x+2) l_{-2}(x+2)] / l_{+1}(x).
// ---------------------------------------------------------------------------

template <class T>
MeasureSeries<T> measure_from_phi(const TranslatedSystem& tr, T phi_star, long n_max, bool normalize) {
    require_upskip(tr);
    if (n_max < tr.U + 2) throw ScopeError("horizon must reach U+2");
    MeasureSeries<T> m;
    m.pic = tr.s;
    m.omega_star = tr.omega_star;
    m.n_max = n_max;
    m.provenance = "phi family";
    m.values.assign(static_cast<size_t>(n_max) + 1, T(0));

    m.values[static_cast<size_t>(tr.U + 1)] = T(1);
    T phi = phi_star;
    for (long x = tr.U + 2; x <= n_max; ++x) {
        if (!(phi > T(0)))
            throw NumericalError("phi admissibility fails at x=" + std::to_string(x - 1) +
                                 ": nonpositive continuation");
        const T down = tr.lambda<T>(-1, x - 1) + tr.lambda<T>(-2, x - 1);
        m.values[static_cast<size_t>(x)] =
            m.values[static_cast<size_t>(x - 1)] * down / (tr.lambda<T>(-2, x) * phi);
        if (x < n_max) {
            const T hx = h_fun<T>(tr, x);
            const T gap = phi - hx;
            if (!(gap > T(0)))
                throw NumericalError("phi admissibility fails at x=" + std::to_string(x) +
                                     ": phi(x) <= h(x), so phi* lies outside [Psi2, Psi1]");
            phi = hx / gap;
        }
    }
    for (long x = tr.U; x >= 0; --x) {
        const T up = tr.lambda<T>(1, x);
        if (!(up > T(0)))
            throw AssumptionError("up rate vanishes at x=" + std::to_string(x));
        const T a = m.values[static_cast<size_t>(x + 1)] *
                    (tr.lambda<T>(-1, x + 1) + tr.lambda<T>(-2, x + 1));
        const T b = (x + 2 <= n_max) ? m.values[static_cast<size_t>(x + 2)] * tr.lambda<T>(-2, x + 2)
                                     : T(0);
        m.values[static_cast<size_t>(x)] = (a + b) / up;
    }
    if (normalize) normalize_series(m);
    detect_instability_onset(m);
    attach_residuals(tr, m);
    return m;
}

// phi implied by a measure at position x (x >= U+2).
template <class T>
T phi_of_measure(const TranslatedSystem& tr, const std::vector<T>& pi, long x) {
    require_upskip(tr);
    if (x < tr.U + 2 || x >= static_cast<long>(pi.size()))
        throw ScopeError("phi is defined for U+2 <= x <= horizon");
    const T down = tr.lambda<T>(-1, x - 1) + tr.lambda<T>(-2, x - 1);
    return pi[static_cast<size_t>(x - 1)] / pi[static_cast<size_t>(x)] * down /
           tr.lambda<T>(-2, x);
}

// ---------------------------------------------------------------------------
// Two-sided bounds on pi(U)/pi(L) from the sign pattern of the basis:
//   r1 = sup { -g_L(n)/g_U(n) : g_L(n) < 0 },
//   r2 = inf { -g_L(n)/g_U(n) : g_U(n) < 0 };
// any measure has pi(U)/pi(L) in [r1, r2], and uniqueness forces r1 = r2.
// ---------------------------------------------------------------------------

struct RatioBounds {
    bool has_r1 = false, has_r2 = false;
    double r1 = 0.0, r2 = 0.0;
    long n_r1 = -1, n_r2 = -1;
    long n_scanned = 0;
};

template <class T>
RatioBounds ratio_bounds(const GammaTable<T>& t) {
    if (t.d != 2) throw ScopeError("ratio bounds require a two-column basis");
    RatioBounds rb;
    for (long n = t.U + 1; n <= t.n_max; ++n) {
        const T gl = t.gamma(n, t.L);
        const T gu = t.gamma(n, t.U);
        if (gu == T(0)) continue;
        const double ratio = -to_double(gl / gu);
        if (gl < T(0) && (!rb.has_r1 || ratio > rb.r1)) {
            rb.r1 = ratio;
            rb.n_r1 = n;
            rb.has_r1 = true;
        }
        if (gu < T(0) && (!rb.has_r2 || ratio < rb.r2)) {
            rb.r2 = ratio;
            rb.n_r2 = n;
            rb.has_r2 = true;
        }
    }
    rb.n_scanned = t.n_max;
    return rb;
}

} // namespace srn
