#include <srn/oracle.hpp>

#include <srn/errors.hpp>

#include <cmath>
#include <numeric>

namespace srn {

namespace {

// Per-state rate table: total rate and the cumulative per-jump rates, built
// lazily and cached because the walk revisits a small set of states.
struct RateCache {
    const TransitionSystem& ts;
    std::vector<long> omega;
    std::vector<double> total;              // -1 marks "not computed"
    std::vector<std::vector<double>> cum;   // cumulative sums per state

    explicit RateCache(const TransitionSystem& sys) : ts(sys), omega(sys.omega) {}

    void ensure(long x) {
        if (x >= static_cast<long>(total.size())) {
            total.resize(static_cast<size_t>(x) + 1, -1.0);
            cum.resize(static_cast<size_t>(x) + 1);
        }
        if (total[static_cast<size_t>(x)] >= 0.0) return;
        std::vector<double> c(omega.size());
        double acc = 0.0;
        for (size_t i = 0; i < omega.size(); ++i) {
            const double r = ts.lambda<double>(omega[i], x);
            if (!(r >= 0.0) || !std::isfinite(r))
                throw NumericalError("rate overflow or invalid value at state " + std::to_string(x));
            acc += r;
            c[i] = acc;
        }
        total[static_cast<size_t>(x)] = acc;
        cum[static_cast<size_t>(x)] = std::move(c);
    }
};

} // namespace

SsaResult ssa_occupancy(const TransitionSystem& ts, const SsaOptions& opt) {
    if (opt.x0 < 0) throw ScopeError("initial state must be nonnegative");
    if (!(opt.t_total > opt.t_burn && opt.t_burn >= 0.0))
        throw ScopeError("need 0 <= burn-in < total time");

    Rng rng(opt.seed);
    RateCache rates(ts);
    std::vector<double> occ; // occupancy time by state, grown on demand

    auto credit = [&](long x, double lo, double hi) {
        lo = std::max(lo, opt.t_burn);
        hi = std::min(hi, opt.t_total);
        if (hi <= lo) return;
        if (x >= static_cast<long>(occ.size())) occ.resize(static_cast<size_t>(x) + 1, 0.0);
        occ[static_cast<size_t>(x)] += hi - lo;
    };

    SsaResult out;
    long x = opt.x0;
    double t = 0.0;
    std::uint64_t events = 0;
    out.termination = "time";
    while (true) {
        rates.ensure(x);
        const double R = rates.total[static_cast<size_t>(x)];
        if (R <= 0.0) {
            credit(x, t, opt.t_total);
            t = opt.t_total;
            out.termination = "stuck";
            break;
        }
        const double dt = -std::log(rng.uniform01()) / R;
        credit(x, t, t + dt);
        t += dt;
        if (t >= opt.t_total) break;
        if (++events > opt.max_events) {
            out.termination = "max-events";
            break;
        }
        const double r = rng.uniform01() * R;
        const auto& c = rates.cum[static_cast<size_t>(x)];
        size_t i = 0;
        while (i + 1 < c.size() && r > c[i]) ++i;
        x += rates.omega[i];
        if (x > opt.max_state) {
            out.termination = "state-bound";
            break;
        }
    }

    out.events = events;
    out.x_final = x;
    out.window = std::min(t, opt.t_total) - opt.t_burn;
    if (out.window <= 0.0) throw NumericalError("simulation ended before the burn-in elapsed");
    for (long sx = 0; sx < static_cast<long>(occ.size()); ++sx)
        if (occ[static_cast<size_t>(sx)] > 0.0)
            out.occupancy[sx] = occ[static_cast<size_t>(sx)] / out.window;
    return out;
}

double total_variation(const std::map<long, double>& emp, const std::vector<double>& ref) {
    double acc = 0.0;
    for (const auto& [x, p] : emp) {
        const double q = (x >= 0 && x < static_cast<long>(ref.size())) ? ref[static_cast<size_t>(x)] : 0.0;
        acc += std::abs(p - q);
    }
    for (long x = 0; x < static_cast<long>(ref.size()); ++x)
        if (emp.find(x) == emp.end()) acc += std::abs(ref[static_cast<size_t>(x)]);
    return acc / 2.0;
}

} // namespace srn
