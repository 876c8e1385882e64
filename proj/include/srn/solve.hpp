#pragma once
// Generator schemes: recover the coefficient vector (v_L..v_U) that combines
// the basis sequences into a (nonnegative) measure.
//
//  * linear scheme: solve the square system built from the 1-norm-scaled
//    basis rows at n-(U-L-1)..n plus the normalization row sum(v) = 1;
//  * quadratic scheme: minimum-norm point of the cone/simplex intersection
//    K_n (all basis rows up to n kept nonnegative), with a conditioning
//    guard that refuses once basis growth has eaten the double mantissa;
//  * measure assembly with normalization, instability onset, residuals;
//  * window-matrix diagnostics: convergence/periodicity of the scheme matrix
//    A(n), recovered generators per residue class, and the normalized tail
//    q(n) = v . gamma(n) / ||gamma(n)||_1.

#include <srn/measure.hpp>
#include <srn/qp.hpp>

#include <cfloat>
#include <cmath>
#include <string>
#include <vector>

namespace srn {

// Scheme matrix A(n): rows gamma(n-k)/||gamma(n-k)||_1 for k = U-L-1..0,
// then a row of ones.  The linear scheme solves A(n) v = e_last.
template <class T>
Mat<T> scheme_matrix(const GammaTable<T>& t, long n) {
    if (n < t.U + 1 || n > t.n_max) throw ScopeError("scheme horizon must lie in (U, n_max]");
    const int d = t.d;
    Mat<T> A(d, d);
    for (int row = 0; row < d - 1; ++row) {
        const long ell = n - (d - 2 - row); // k = d-2 .. 0
        const T norm = t.row_norm1(ell);
        // Vet the row in the working type: a huge-but-finite high-precision
        // norm is fine (the scaled entries are O(1)), only zero/non-finite
        // rows are unusable.
        bool bad = !(norm > T(0));
        if constexpr (!scalar_traits<T>::is_exact) {
            using std::isfinite;
            bad = bad || !isfinite(norm);
        }
        if (bad)
            throw NumericalError("basis row at n=" + std::to_string(ell) +
                                 " is unusable (zero or overflowed); reduce n or raise precision");
        for (int j = 0; j < d; ++j) A(row, j) = t.gamma(ell, t.L + j) / norm;
    }
    for (int j = 0; j < d; ++j) A(d - 1, j) = T(1);
    return A;
}

template <class T>
Generator<T> linear_scheme(const GammaTable<T>& t, long n) {
    Mat<T> A = scheme_matrix(t, n);
    std::vector<T> rhs(static_cast<size_t>(t.d), T(0));
    rhs.back() = T(1);
    std::vector<T> v;
    try {
        v = solve_linear(A, rhs);
    } catch (const NumericalError&) {
        throw NumericalError("scheme matrix singular at n=" + std::to_string(n) +
                             "; try a different horizon");
    }
    Generator<T> g;
    g.pic = t.ts.s;
    g.L = t.L;
    g.U = t.U;
    g.v = std::move(v);
    g.method = "linear";
    g.n_used = n;
    for (size_t j = 0; j < g.v.size(); ++j) {
        if (to_double(g.v[j]) < -1e-12) {
            g.note = "negative coefficient v[" + std::to_string(t.L + static_cast<long>(j)) +
                     "]; horizon may be too small";
            break;
        }
    }
    return g;
}

template <class T>
struct SweepResult {
    Generator<T> gen;
    long n_final = 0;
    double movement = -1.0; // inf-norm change over the last doubling
    bool converged = false;
};

// Double the horizon from U+5 until the recovered coefficients move by less
// than `tol` (inf norm) or the table is exhausted.
template <class T>
SweepResult<T> linear_scheme_auto(const GammaTable<T>& t, double tol = 1e-9) {
    SweepResult<T> r;
    long n = std::min(t.n_max, t.U + 5);
    r.gen = linear_scheme(t, n);
    r.n_final = n;
    while (n < t.n_max) {
        n = std::min(t.n_max, 2 * n);
        Generator<T> next = linear_scheme(t, n);
        double move = 0;
        for (size_t j = 0; j < next.v.size(); ++j)
            move = std::max(move, std::abs(to_double(next.v[j] - r.gen.v[j])));
        r.gen = std::move(next);
        r.n_final = n;
        r.movement = move;
        if (move < tol) {
            r.converged = true;
            break;
        }
    }
    return r;
}

// Guard threshold: once d * eps * max|gamma| exceeds this, the constraint
// rows have lost too much precision for the quadratic scheme to be trusted.
inline constexpr double kQpGuardThreshold = 1e-8;

template <class T>
Generator<double> qp_generator(const GammaTable<T>& t, long n) {
    if (n < t.U + 1 || n > t.n_max) throw ScopeError("qp horizon must lie in (U, n_max]");
    double gmax = 0;
    for (long ell = 0; ell <= n; ++ell)
        for (long j = t.L; j <= t.U; ++j)
            gmax = std::max(gmax, std::abs(to_double(t.gamma(ell, j))));
    const double guard = t.d * DBL_EPSILON * gmax;
    if (!(guard <= kQpGuardThreshold))
        throw NumericalError(
            "qp guard tripped: basis magnitude " + std::to_string(gmax) +
            " leaves estimated row error " + std::to_string(guard) +
            " > 1e-8; use the linear scheme or a higher-precision backend");

    QpProblem prob;
    prob.d = t.d;
    for (long ell = 0; ell <= n; ++ell) {
        if (ell >= t.L && ell <= t.U) continue; // identity block = the bound rows
        // Scale in the working type first: rows far outside double range
        // (high-precision tables) would otherwise under/overflow on
        // conversion and silently drop the constraint.
        T amax(0);
        for (long j = t.L; j <= t.U; ++j) {
            T v = t.gamma(ell, j);
            if (v < T(0)) v = -v;
            if (v > amax) amax = v;
        }
        if (!(amax > T(0))) continue; // row of zeros constrains nothing
        std::vector<double> row(static_cast<size_t>(t.d));
        for (long j = t.L; j <= t.U; ++j)
            row[static_cast<size_t>(j - t.L)] = to_double(t.gamma(ell, j) / amax);
        prob.ineq_rows.push_back(std::move(row));
    }
    QpSolution sol = solve_simplex_qp(prob);

    Generator<double> g;
    g.pic = t.ts.s;
    g.L = t.L;
    g.U = t.U;
    g.v = sol.v;
    g.method = "qp";
    g.n_used = n;
    g.kkt_residual = sol.kkt_residual;
    return g;
}

// pi(ell) = sum_j v_j gamma_j(ell) for ell = 0..n_max.
template <class T>
MeasureSeries<T> assemble_measure(const GammaTable<T>& t, const Generator<T>& gen, bool normalize) {
    MeasureSeries<T> m;
    m.pic = t.ts.s;
    m.omega_star = t.ts.omega_star;
    m.n_max = t.n_max;
    m.provenance = gen.method + " scheme, n=" + std::to_string(gen.n_used);
    m.values.resize(static_cast<size_t>(t.n_max) + 1);
    for (long ell = 0; ell <= t.n_max; ++ell) {
        T acc(0);
        for (long j = t.L; j <= t.U; ++j)
            acc += gen.v[static_cast<size_t>(j - t.L)] * t.gamma(ell, j);
        m.values[static_cast<size_t>(ell)] = acc;
    }
    detect_instability_onset(m); // onset recorded on the raw combination
    if (normalize) normalize_series(m);
    attach_residuals(t.ts, m);
    return m;
}

// ---------------------------------------------------------------------------
// Window-matrix diagnostics.
// ---------------------------------------------------------------------------

struct ADiagEntry {
    long n = 0;
    double delta = -1.0; // max |A(n) - A(n-d)|, same residue class; -1 if n-d < lo
    double det = 0.0;
    bool invertible = false;
    std::vector<double> generator; // empty when not invertible
};

struct ADiagnostics {
    int d = 1;
    long n_lo = 0, n_hi = 0;
    bool heuristic = false;             // maximal jump != +1: limit theory not covered
    std::vector<double> delta_by_shift; // [p-1] = max |A(n) - A(n-p)|, p = 1..d
    long period = 0;                    // smallest p with shift-delta <= 0.02; 0 = none
    std::vector<ADiagEntry> entries;
    double cross_residue_disagreement = -1.0; // max pairwise diff of last d generators
    std::vector<std::pair<long, double>> q_tail; // (n, v.gamma(n)/||gamma(n)||_1)
    std::string label; // "converged" | "periodic" | "drifting" | "degenerate"
};

template <class T>
ADiagnostics a_matrix_diagnostics(const GammaTable<T>& t, long n_lo, long n_hi) {
    if (n_lo < t.U + t.d - 1 || n_hi > t.n_max || n_hi < n_lo)
        throw ScopeError("diagnostic window must lie inside [U+d-1, n_max]");
    ADiagnostics diag;
    diag.d = t.d;
    diag.n_lo = n_lo;
    diag.n_hi = n_hi;
    diag.heuristic = t.ts.omega_plus != 1;

    auto mat_double = [&](long n) {
        Mat<T> A = scheme_matrix(t, n);
        Mat<double> B(t.d, t.d);
        for (int i = 0; i < t.d; ++i)
            for (int j = 0; j < t.d; ++j) B(i, j) = to_double(A(i, j));
        return B;
    };

    std::vector<Mat<double>> window;
    for (long n = n_lo; n <= n_hi; ++n) window.push_back(mat_double(n));

    diag.delta_by_shift.assign(static_cast<size_t>(t.d), 0.0);
    for (int p = 1; p <= t.d; ++p) {
        double worst = 0;
        for (long n = n_lo + p; n <= n_hi; ++n) {
            const Mat<double>& A = window[static_cast<size_t>(n - n_lo)];
            const Mat<double>& B = window[static_cast<size_t>(n - p - n_lo)];
            for (int i = 0; i < t.d; ++i)
                for (int j = 0; j < t.d; ++j) worst = std::max(worst, std::abs(A(i, j) - B(i, j)));
        }
        diag.delta_by_shift[static_cast<size_t>(p - 1)] = worst;
    }
    for (int p = 1; p <= t.d; ++p) {
        if (diag.delta_by_shift[static_cast<size_t>(p - 1)] <= 0.02) {
            diag.period = p;
            break;
        }
    }

    long degenerate = 0;
    for (long n = n_lo; n <= n_hi; ++n) {
        ADiagEntry e;
        e.n = n;
        if (n - t.d >= n_lo) {
            const Mat<double>& A = window[static_cast<size_t>(n - n_lo)];
            const Mat<double>& B = window[static_cast<size_t>(n - t.d - n_lo)];
            double worst = 0;
            for (int i = 0; i < t.d; ++i)
                for (int j = 0; j < t.d; ++j) worst = std::max(worst, std::abs(A(i, j) - B(i, j)));
            e.delta = worst;
        }
        Mat<double> A = window[static_cast<size_t>(n - n_lo)];
        e.det = determinant(A);
        e.invertible = std::abs(e.det) >= 1e-8;
        if (e.invertible) {
            Mat<double> B = window[static_cast<size_t>(n - n_lo)];
            std::vector<double> rhs(static_cast<size_t>(t.d), 0.0);
            rhs.back() = 1.0;
            e.generator = solve_linear(B, rhs);
        } else {
            ++degenerate;
        }
        diag.entries.push_back(std::move(e));
    }

    // Pairwise disagreement of the last d recovered generators (one per
    // residue class mod d when the matrices are periodic).
    {
        std::vector<const std::vector<double>*> last;
        for (auto it = diag.entries.rbegin(); it != diag.entries.rend() && static_cast<int>(last.size()) < t.d; ++it)
            if (it->invertible) last.push_back(&it->generator);
        if (static_cast<int>(last.size()) == t.d) {
            double worst = 0;
            for (size_t a = 0; a < last.size(); ++a)
                for (size_t b = a + 1; b < last.size(); ++b)
                    for (int j = 0; j < t.d; ++j)
                        worst = std::max(worst, std::abs((*last[a])[static_cast<size_t>(j)] -
                                                         (*last[b])[static_cast<size_t>(j)]));
            diag.cross_residue_disagreement = worst;
        }
    }

    // Normalized tail of the assembled sequence, using the newest generator.
    const std::vector<double>* vgen = nullptr;
    for (auto it = diag.entries.rbegin(); it != diag.entries.rend(); ++it)
        if (it->invertible) {
            vgen = &it->generator;
            break;
        }
    if (vgen) {
        const long count = std::min<long>(16, n_hi - n_lo + 1);
        for (long n = n_hi - count + 1; n <= n_hi; ++n) {
            // Accumulate in the working type: the raw rows may exceed double
            // range even though the normalized tail is O(1).
            T num(0);
            for (long j = t.L; j <= t.U; ++j)
                num += T((*vgen)[static_cast<size_t>(j - t.L)]) * t.gamma(n, j);
            const T den = t.row_norm1(n);
            diag.q_tail.emplace_back(n, den > T(0) ? to_double(num / den) : 0.0);
        }
    }

    if (degenerate * 2 > static_cast<long>(diag.entries.size()))
        diag.label = "degenerate";
    else if (diag.period == 1 && diag.delta_by_shift[0] <= 1e-6)
        diag.label = "converged";
    else if (diag.period >= 1)
        diag.label = "periodic";
    else
        diag.label = "drifting";
    return diag;
}

} // namespace srn
