#pragma once
// Minimal dense linear algebra for the small systems that appear here
// (boundary blocks and scheme matrices, dimension <= ~10).  Templated so the
// identical elimination runs over binary64, MPFR floats and exact rationals.
#include <vector>

#include "srn/errors.hpp"
#include "srn/scalar.hpp"

namespace srn {

template <class T>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, T(0)) {}

    T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
    bool empty() const { return rows == 0 || cols == 0; }
};

// In-place LU with partial pivoting.  Returns false when singular (exact zero
// pivot; float callers should inspect the pivot ratio themselves).
template <class T>
bool lu_factor(Mat<T>& A, std::vector<int>& piv, int& sign) {
    const int n = A.rows;
    piv.resize(n);
    sign = 1;
    for (int k = 0; k < n; ++k) {
        int p = k;
        T best = abs(A(k, k));
        for (int i = k + 1; i < n; ++i) {
            T v = abs(A(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (!(best > T(0))) return false;
        piv[k] = p;
        if (p != k) {
            sign = -sign;
            for (int j = 0; j < A.cols; ++j) std::swap(A(k, j), A(p, j));
        }
        for (int i = k + 1; i < n; ++i) {
            T m = A(i, k) / A(k, k);
            A(i, k) = m;
            for (int j = k + 1; j < A.cols; ++j) A(i, j) -= m * A(k, j);
        }
    }
    return true;
}

template <class T>
void lu_solve_inplace(const Mat<T>& LU, const std::vector<int>& piv, std::vector<T>& b) {
    const int n = LU.rows;
    // The factorization swaps whole rows (stored multipliers included), so all
    // row interchanges must be applied to b before the triangular sweeps.
    for (int k = 0; k < n; ++k)
        if (piv[k] != k) std::swap(b[k], b[piv[k]]);
    for (int k = 0; k < n; ++k) {
        for (int i = k + 1; i < n; ++i) b[i] -= LU(i, k) * b[k];
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) b[i] -= LU(i, j) * b[j];
        b[i] /= LU(i, i);
    }
}

// Solve A x = b; throws NumericalError when A is singular.
template <class T>
std::vector<T> solve_linear(Mat<T> A, std::vector<T> b, const char* what = "linear system") {
    std::vector<int> piv;
    int sign;
    if (!lu_factor(A, piv, sign))
        throw NumericalError(std::string(what) + " is singular");
    lu_solve_inplace(A, piv, b);
    return b;
}

template <class T>
T determinant(Mat<T> A) {
    std::vector<int> piv;
    int sign;
    if (!lu_factor(A, piv, sign)) return T(0);
    T d(sign);
    for (int i = 0; i < A.rows; ++i) d *= A(i, i);
    return d;
}

// Crude reciprocal-condition estimate from the LU pivots (min/max |U_ii|).
template <class T>
double pivot_rcond(Mat<T> A) {
    std::vector<int> piv;
    int sign;
    if (!lu_factor(A, piv, sign)) return 0.0;
    double mx = 0.0, mn = std::numeric_limits<double>::infinity();
    for (int i = 0; i < A.rows; ++i) {
        double v = std::fabs(to_double(A(i, i)));
        mx = std::max(mx, v);
        mn = std::min(mn, v);
    }
    return mx > 0 ? mn / mx : 0.0;
}

}  // namespace srn
