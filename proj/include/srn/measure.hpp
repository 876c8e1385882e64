#pragma once
// Shared containers for computed stationary measures: generator vectors,
// measure series with normalization bookkeeping, and residual checks against
// the master equation and the telescoped flux identity.

#include <srn/chain.hpp>
#include <srn/coeff.hpp>

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace srn {

// Coefficients (v_L, ..., v_U) combining the basis sequences of one class.
template <class T>
struct Generator {
    long pic = 0;       // class representative s in original state space
    long L = 0, U = 0;  // translated support window
    std::vector<T> v;   // size U - L + 1
    std::string method; // "linear", "qp", "closed"
    long n_used = 0;            // largest translated index used by the solve
    double kkt_residual = -1.0; // qp only; negative when not applicable
    std::string note;
};

// A measure on one irreducible class, stored on the translated lattice
// x = omega_star * ell + s for ell = 0..n_max.
template <class T>
struct MeasureSeries {
    long pic = 0;
    long omega_star = 1;
    long n_max = 0;
    std::vector<T> values; // index ell = 0..n_max
    bool normalized = false;
    bool norm_converged = false;
    T norm_constant = T(1); // partial sum used for normalization
    long norm_horizon = 0;  // horizon at which the tail test was decided
    std::optional<long> instability_onset; // first ell with values[ell] < 0
    T onset_value = T(0);
    double residual_master = -1.0;
    double residual_flux = -1.0;
    std::string provenance;

    long original_state(long ell) const { return omega_star * ell + pic; }
};

// Doubling-horizon tail test on the partial sums of `values`: converged when
// the mass added over the last half and the last three quarters are both
// below rel_tol relative to the full partial sum.
template <class T>
struct TailTest {
    bool converged = false;
    T total = T(0);
    long horizon = 0;
};

template <class T>
TailTest<T> partial_sum_tail_test(const std::vector<T>& values, double rel_tol = 1e-14) {
    TailTest<T> r;
    r.horizon = static_cast<long>(values.size()) - 1;
    const long n = static_cast<long>(values.size());
    if (n == 0) return r;
    T s(0);
    T at_quarter(0), at_half(0);
    for (long i = 0; i < n; ++i) {
        s += values[static_cast<size_t>(i)];
        if (i == n / 4) at_quarter = s;
        if (i == n / 2) at_half = s;
    }
    r.total = s;
    const double total_d = std::abs(to_double(s));
    if (total_d == 0.0) return r;
    const double tail_half = std::abs(to_double(s - at_half));
    const double tail_quarter = std::abs(to_double(s - at_quarter));
    // A sum beyond double range cannot be certified: inf <= tol*inf would
    // pass vacuously for a divergent series.
    if (!std::isfinite(total_d) || !std::isfinite(tail_half) || !std::isfinite(tail_quarter))
        return r;
    r.converged = tail_half <= rel_tol * total_d && tail_quarter <= std::sqrt(rel_tol) * total_d;
    return r;
}

// Divide by the partial sum when the tail test certifies decay; otherwise
// leave the series untouched and record the failure.
template <class T>
void normalize_series(MeasureSeries<T>& m, double rel_tol = 1e-14) {
    auto tt = partial_sum_tail_test(m.values, rel_tol);
    m.norm_constant = tt.total;
    m.norm_horizon = tt.horizon;
    m.norm_converged = tt.converged;
    if (!tt.converged || to_double(tt.total) <= 0.0) {
        m.normalized = false;
        return;
    }
    for (auto& v : m.values) v /= tt.total;
    m.normalized = true;
}

// Record the first strictly negative entry (numerical instability marker).
template <class T>
void detect_instability_onset(MeasureSeries<T>& m) {
    m.instability_onset.reset();
    for (long ell = 0; ell < static_cast<long>(m.values.size()); ++ell) {
        const T& v = m.values[static_cast<size_t>(ell)];
        if (v < T(0)) {
            m.instability_onset = ell;
            m.onset_value = v;
            return;
        }
    }
}

struct ResidualReport {
    double max_master = 0.0; // max normalized master-equation residual
    long arg_master = -1;
    double max_flux = 0.0; // max normalized flux-identity residual
    long arg_flux = -1;
    long checked_up_to = 0;
    bool master_exact_zero = false; // meaningful for the exact backend only
};

// Master-equation residual from the raw rates:
//   r(x) = sum_w [ lambda_w(x - w) pi(x - w) - lambda_w(x) pi(x) ],
// normalized by 1 + |pi(x)| * R(x).  States outside [0, n_max] contribute
// zero mass.  Checked for x <= n_max - |omega_min| so every needed value is
// inside the table.  Works on both the original and the translated chain.
template <class T, class System>
ResidualReport master_residual_base(const System& sys, const std::vector<T>& pi) {
    ResidualReport rep;
    const long n_max = static_cast<long>(pi.size()) - 1;
    auto value = [&](long x) { return (x < 0 || x > n_max) ? T(0) : pi[static_cast<size_t>(x)]; };

    const long x_hi_master = n_max + sys.omega_minus; // omega_minus < 0
    bool all_zero = true;
    for (long x = 0; x <= x_hi_master; ++x) {
        T r(0);
        for (long w : sys.omega) {
            r += sys.template lambda<T>(w, x - w) * value(x - w);
            r -= sys.template lambda<T>(w, x) * value(x);
        }
        if (!(r == T(0))) all_zero = false;
        const double denom =
            1.0 + std::abs(to_double(value(x))) * to_double(sys.template total_rate<T>(x));
        const double rn = std::abs(to_double(r)) / denom;
        if (rn > rep.max_master) {
            rep.max_master = rn;
            rep.arg_master = x;
        }
    }
    rep.master_exact_zero = all_zero;
    rep.checked_up_to = x_hi_master;
    return rep;
}

// Master residual plus the telescoped flux identity
//   sum_{k=0}^{m*} pi(l - k) c_k(l - k) = 0 for l > U - L.
template <class T>
ResidualReport residual_report(const TranslatedSystem& tr, const std::vector<T>& pi) {
    ResidualReport rep = master_residual_base(tr, pi);
    const long n_max = static_cast<long>(pi.size()) - 1;
    auto value = [&](long x) { return (x < 0 || x > n_max) ? T(0) : pi[static_cast<size_t>(x)]; };
    for (long ell = tr.U - tr.L + 1; ell <= n_max; ++ell) {
        T r(0);
        for (long k = 0; k <= tr.m_star; ++k) r += value(ell - k) * c_fun<T>(tr, k, ell - k);
        const double denom =
            1.0 + std::abs(to_double(value(ell))) * to_double(tr.total_rate<T>(ell));
        const double rn = std::abs(to_double(r)) / denom;
        if (rn > rep.max_flux) {
            rep.max_flux = rn;
            rep.arg_flux = ell;
        }
    }
    return rep;
}

template <class T>
void attach_residuals(const TranslatedSystem& tr, MeasureSeries<T>& m) {
    auto rep = residual_report(tr, m.values);
    m.residual_master = rep.max_master;
    m.residual_flux = rep.max_flux;
}

} // namespace srn
