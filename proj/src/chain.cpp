#include "srn/chain.hpp"

#include <algorithm>
#include <climits>
#include <numeric>

namespace srn {
namespace {

long floordiv(long a, long b) {  // b > 0
    long q = a / b, r = a % b;
    return (r != 0 && r < 0) ? q - 1 : q;
}
long ceildiv(long a, long b) { return -floordiv(-a, b); }

}  // namespace

Classification classify(const TransitionSystem& ts) {
    Classification cl;
    long i = LONG_MAX, i_plus = LONG_MAX, o = LONG_MAX, o_minus = LONG_MAX, gcd = 0;
    for (long w : ts.omega) {
        long iw = ts.threshold(w);
        long ow = iw + w;  // smallest state reachable by this jump
        i = std::min(i, iw);
        o = std::min(o, ow);
        if (w > 0) i_plus = std::min(i_plus, iw);
        if (w < 0) o_minus = std::min(o_minus, ow);
        gcd = std::gcd(gcd, std::labs(w));
    }
    cl.i = i;
    cl.i_plus = i_plus;
    cl.o = o;
    cl.o_minus = o_minus;
    cl.omega_star = gcd;

    cl.neutral = {0, std::min(i, o) - 1};
    cl.trapping = {o, i - 1};
    cl.escaping = {i, std::max(i_plus, o_minus) - 1};

    long nT = cl.trapping.size();
    if (nT == 0) {
        for (long s = o_minus; s < o_minus + gcd; ++s) cl.pics.push_back(s);
    } else if (nT >= gcd) {
        for (long s = i_plus; s < i_plus + gcd; ++s) cl.qics.push_back(s);
    } else {
        for (long s = i_plus; s < o_minus + gcd; ++s) cl.pics.push_back(s);
        for (long s = o_minus + gcd; s < i_plus + gcd; ++s) cl.qics.push_back(s);
    }
    return cl;
}

long default_pic(const TransitionSystem& ts) {
    auto cl = classify(ts);
    if (cl.pics.empty())
        throw ScopeError("network has no positive irreducible component (only QICs)");
    return cl.pics.front();
}

TranslatedSystem translate(const TransitionSystem& ts, long s) {
    auto cl = classify(ts);
    if (std::find(cl.pics.begin(), cl.pics.end(), s) == cl.pics.end())
        throw ScopeError("s=" + std::to_string(s) + " is not a PIC residue of this network");

    TranslatedSystem tr;
    tr.base = std::make_shared<TransitionSystem>(ts);
    tr.s = s;
    tr.omega_star = cl.omega_star;
    tr.rational_capable = ts.rational_capable;
    for (long w : ts.omega) {
        long wt = w / cl.omega_star;
        tr.omega.push_back(wt);
        // lambda'_w(x) > 0  <=>  omega_star*x + s >= i_{w*omega_star}
        tr.i_omega[wt] = std::max(0L, ceildiv(ts.threshold(w) - s, cl.omega_star));
    }
    std::sort(tr.omega.begin(), tr.omega.end());
    tr.omega_minus = tr.omega.front();
    tr.omega_plus = tr.omega.back();
    tr.m_star = tr.omega_plus - tr.omega_minus - 1;
    tr.L = tr.i_omega.at(tr.omega_minus) + tr.omega_minus;
    tr.U = tr.i_omega.at(tr.omega_minus) - 1;
    if (tr.L < 0 || tr.U - tr.L != -tr.omega_minus - 1)
        throw InternalError("translated generating range is inconsistent");
    return tr;
}

}  // namespace srn
