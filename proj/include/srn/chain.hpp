#pragma once
// State-space classification of the chain into neutral / trapping / escaping
// states and positive or quasi irreducible components (PICs / QICs), plus the
// translation of a PIC onto the non-negative integers with gcd-1 jumps.
#include <memory>
#include <vector>

#include "srn/network.hpp"

namespace srn {

// Inclusive integer range; empty when hi < lo.
struct StateRange {
    long lo = 0, hi = -1;
    bool empty() const { return hi < lo; }
    long size() const { return empty() ? 0 : hi - lo + 1; }
    bool contains(long x) const { return x >= lo && x <= hi; }
};

struct Classification {
    StateRange neutral, trapping, escaping;
    long omega_star = 1;          // gcd of the jump sizes
    std::vector<long> pics;       // PIC minima: component = omega_star*N0 + s
    std::vector<long> qics;       // QIC minima
    long i = 0, i_plus = 0, o = 0, o_minus = 0;
};

Classification classify(const TransitionSystem& ts);

// The chain restricted to the PIC omega_star*N0 + s, relabelled to N0.
// Rates: lambda'_w(x) = lambda_{w*omega_star}(omega_star*x + s).
struct TranslatedSystem {
    std::shared_ptr<const TransitionSystem> base;
    long s = 0;
    long omega_star = 1;
    std::vector<long> omega;      // translated jumps, gcd 1
    std::map<long, long> i_omega; // translated activation thresholds
    long omega_minus = 0, omega_plus = 0, m_star = 0;
    long L = 0, U = 0;            // generating-term range: d = U-L+1 = -omega_minus
    bool rational_capable = true;

    int d() const { return static_cast<int>(U - L + 1); }

    template <class T>
    T lambda(long w, long x) const {
        if (x < 0) return T(0);
        return base->lambda<T>(w * omega_star, omega_star * x + s);
    }
    template <class T>
    T total_rate(long x) const {
        T sum(0);
        for (long w : omega) sum += lambda<T>(w, x);
        return sum;
    }
    long threshold(long w) const { return i_omega.at(w); }
};

// s must be one of classify(ts).pics.
TranslatedSystem translate(const TransitionSystem& ts, long s);

// The lowest PIC residue, or ScopeError when the network has no PIC.
long default_pic(const TransitionSystem& ts);

}  // namespace srn
