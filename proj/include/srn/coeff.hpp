#pragma once
// Flux-balance coefficient machinery for a translated chain: the cut sets
// B_k, the coefficient functions c_k / f_k, the boundary system relating
// states below L to the generating terms, and the gamma recursion
//
//   gamma_j(l) = 0                                   l < 0
//   gamma_j(l) = G_{l,j-L}   (j < U),  0  (j = U)    0 <= l < L
//   gamma_j(l) = delta_{l,j}                         L <= l <= U
//   gamma_j(l) = sum_{k=1}^{m*} gamma_j(l-k) f_k(l)  l > U
//
// together with its upper-Hessenberg determinant representation.
#include <vector>

#include "srn/chain.hpp"
#include "srn/smallmat.hpp"

namespace srn {

template <class T>
bool scalar_finite(const T& v) {
    return true;  // exact backend never overflows
}
inline bool scalar_finite(const double& v) { return std::isfinite(v); }
inline bool scalar_finite(const HighFloat& v) {
    return mpfr_number_p(v.backend().data()) != 0;
}

// B_k = {w in Omega : k'(w - k') > 0} with k' = omega_minus + k + 1/2.
inline std::vector<long> jump_set(const TranslatedSystem& ts, long k) {
    long twice_kp = 2 * (ts.omega_minus + k) + 1;  // 2k', avoids half-integers
    std::vector<long> out;
    for (long w : ts.omega) {
        if (twice_kp > 0 ? 2 * w > twice_kp : 2 * w < twice_kp) out.push_back(w);
    }
    return out;
}

// c_k(l) = sgn(k') * sum_{w in B_k} lambda_w(l);  zero for l < 0.
template <class T>
T c_fun(const TranslatedSystem& ts, long k, long ell) {
    long twice_kp = 2 * (ts.omega_minus + k) + 1;
    T sum(0);
    for (long w : jump_set(ts, k)) sum += ts.lambda<T>(w, ell);
    return twice_kp > 0 ? sum : -sum;
}

// f_k(l) = -c_k(l-k) / c_0(l) for l > U; f_0 = -1.
template <class T>
T f_fun(const TranslatedSystem& ts, long k, long ell) {
    if (ell <= ts.U) throw InternalError("f_k evaluated at l <= U");
    T c0 = c_fun<T>(ts, 0, ell);
    if (!(c0 < T(0))) throw InternalError("c_0(l) >= 0 for l > U breaks (A2)");
    if (k == 0) return T(-1);
    return -c_fun<T>(ts, k, ell - k) / c0;
}

// Boundary system H (L x U) and its reduced complement G (L x (U-L)):
// the first L master equations pin states 0..L-1 to the generating terms,
// gamma(0..L-1) = G * gamma(L..U-1).  Empty when L = 0 or U = L.
template <class T>
void boundary_matrices(const TranslatedSystem& ts, Mat<T>& H, Mat<T>& G) {
    const long L = ts.L, U = ts.U;
    H = Mat<T>();
    G = Mat<T>();
    if (L == 0 || U == L) return;

    H = Mat<T>(static_cast<int>(L), static_cast<int>(U));
    std::vector<T> R(L);
    for (long m = 0; m < L; ++m) {
        R[m] = ts.total_rate<T>(m);
        if (!(R[m] > T(0)))
            throw InternalError("total rate vanishes at state " + std::to_string(m) +
                                " inside a PIC");
        for (long n = 0; n < U; ++n) {
            T h = (m == n) ? T(1) : T(0);
            h -= ts.lambda<T>(m - n, n) / R[m];
            H(static_cast<int>(m), static_cast<int>(n)) = h;
        }
    }

    // Solve H1 * G = -H2 with the columns of H1 scaled by the total rates;
    // the scaled block is weakly chain diagonally dominant, so the pivoted
    // elimination is safe in floating point.
    Mat<T> A(static_cast<int>(L), static_cast<int>(L));
    for (int m = 0; m < L; ++m)
        for (int n = 0; n < L; ++n) A(m, n) = H(m, n) * R[n];
    std::vector<int> piv;
    int sign;
    if (!lu_factor(A, piv, sign))
        throw InternalError("boundary block H1 is singular; (A1)/(A2) premise broken");

    G = Mat<T>(static_cast<int>(L), static_cast<int>(U - L));
    std::vector<T> col(L);
    for (int j = 0; j < U - L; ++j) {
        for (int m = 0; m < L; ++m) col[m] = -H(m, static_cast<int>(L) + j);
        lu_solve_inplace(A, piv, col);
        for (int m = 0; m < L; ++m) G(m, j) = col[m] * R[m];
    }
}

template <class T>
struct GammaTable {
    TranslatedSystem ts;
    long n_max = 0;
    long L = 0, U = 0, m_star = 0;
    int d = 1;                     // number of generating terms
    std::vector<T> g;              // (n_max+1) x d, row-major
    std::vector<std::vector<T>> f; // f[l][k-1] = f_k(l) for l > U
    Mat<T> H, G;
    std::vector<double> row_cond;  // max|term| / |result| per recursion row
    bool overflowed = false;
    long first_overflow = -1;

    const T& gamma(long ell, long j) const {  // j in [L, U]
        return g[static_cast<size_t>(ell) * d + (j - L)];
    }
    T gamma_or_zero(long ell, long j) const { return ell < 0 ? T(0) : gamma(ell, j); }
    T row_norm1(long ell) const {
        T s(0);
        for (long j = L; j <= U; ++j) s += abs(gamma(ell, j));
        return s;
    }
    T f_cached(long ell, long k) const { return f[ell][k - 1]; }
};

template <class T>
GammaTable<T> build_gamma_table(const TranslatedSystem& ts, long n_max) {
    if (n_max < ts.U) throw NumericalError("gamma table horizon must reach U");
    GammaTable<T> t;
    t.ts = ts;
    t.n_max = n_max;
    t.L = ts.L;
    t.U = ts.U;
    t.m_star = ts.m_star;
    t.d = ts.d();
    t.g.assign(static_cast<size_t>(n_max + 1) * t.d, T(0));
    t.f.resize(n_max + 1);
    t.row_cond.assign(n_max + 1, 0.0);
    boundary_matrices(ts, t.H, t.G);

    auto at = [&](long ell, long j) -> T& {
        return t.g[static_cast<size_t>(ell) * t.d + (j - t.L)];
    };
    for (long ell = 0; ell < t.L; ++ell)
        for (long j = t.L; j < t.U; ++j)
            at(ell, j) = t.G(static_cast<int>(ell), static_cast<int>(j - t.L));
    for (long ell = t.L; ell <= t.U; ++ell) at(ell, ell) = T(1);

    for (long ell = t.U + 1; ell <= n_max; ++ell) {
        auto& frow = t.f[ell];
        frow.reserve(t.m_star);
        for (long k = 1; k <= t.m_star; ++k) frow.push_back(f_fun<T>(ts, k, ell));

        double max_term = 0.0, max_val = 0.0;
        for (long j = t.L; j <= t.U; ++j) {
            T acc(0);
            for (long k = 1; k <= t.m_star; ++k) {
                if (ell - k < 0) break;
                T term = t.gamma(ell - k, j) * frow[k - 1];
                acc += term;
                if constexpr (!scalar_traits<T>::is_exact)
                    max_term = std::max(max_term, std::fabs(to_double(term)));
            }
            at(ell, j) = acc;
            if constexpr (!scalar_traits<T>::is_exact) {
                max_val = std::max(max_val, std::fabs(to_double(acc)));
                if (!scalar_finite(acc) && t.first_overflow < 0) {
                    t.overflowed = true;
                    t.first_overflow = ell;
                }
            }
        }
        if constexpr (!scalar_traits<T>::is_exact)
            t.row_cond[ell] = max_val > 0 ? max_term / max_val
                                          : (max_term > 0 ? std::numeric_limits<double>::infinity()
                                                          : 1.0);
    }
    return t;
}

// gamma_j(U+r) as the leading principal minor of the band matrix, by
// expansion along the last row: cost O(r * m*).  Uses only boundary rows of
// the table, so it cross-checks the recursion rows.
template <class T>
T hessenberg_gamma(const GammaTable<T>& t, long j, long r) {
    if (r < 1) throw InternalError("determinant representation needs l > U");
    const long m = t.m_star;
    auto g_of = [&](long k) {  // boundary fold-in, k = 1..m*
        T acc(0);
        for (long i = 0; i + k <= m; ++i) {
            long state = t.U + i + k - m;
            if (state < 0) continue;
            acc += f_fun<T>(t.ts, m - i, t.U + k) * t.gamma(state, j);
        }
        return acc;
    };
    std::vector<T> d(static_cast<size_t>(r) + 1);
    d[0] = T(1);
    for (long p = 1; p <= r; ++p) {
        T acc = (p <= m) ? g_of(p) : T(0);
        for (long k = 1; k <= std::min(p - 1, m); ++k)
            acc += f_fun<T>(t.ts, k, t.U + p) * d[p - k];
        d[p] = acc;
    }
    return d[r];
}

// The same determinant evaluated directly on the materialized r x r band
// matrix via pivoted elimination (test oracle for hessenberg_gamma).
template <class T>
T hessenberg_det_direct(const GammaTable<T>& t, long j, long r) {
    const long m = t.m_star;
    Mat<T> B(static_cast<int>(r), static_cast<int>(r));
    for (long p = 1; p <= r; ++p) {
        // first column: boundary terms
        if (p <= m) {
            T acc(0);
            for (long i = 0; i + p <= m; ++i) {
                long state = t.U + i + p - m;
                if (state < 0) continue;
                acc += f_fun<T>(t.ts, m - i, t.U + p) * t.gamma(state, j);
            }
            B(static_cast<int>(p - 1), 0) = acc;
        }
        for (long q = 2; q <= r; ++q) {
            long k = p - q + 1;
            if (k < 0 || k > m) continue;
            B(static_cast<int>(p - 1), static_cast<int>(q - 1)) =
                (k == 0) ? T(-1) : f_fun<T>(t.ts, k, t.U + p);
        }
    }
    return determinant(std::move(B));
}

}  // namespace srn
