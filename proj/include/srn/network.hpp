#pragma once
// Reaction-network DSL and the jump-set/rate-function view of the induced
// continuous-time Markov chain on the non-negative integers.
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srn/expr.hpp"
#include "srn/scalar.hpp"

namespace srn {

struct RateSpec {
    enum class Kind { MassAction, Expression } kind = Kind::MassAction;
    Rational kappa;                          // mass-action constant (> 0)
    ExprPtr expr;                            // expression rate
    std::optional<long> declared_threshold;  // user-declared activation state
};

struct Reaction {
    long source = 0;  // molecule count of the source complex
    long target = 0;  // molecule count of the target complex
    RateSpec rate;
};

// One clause per line: "complex (->|<->) complex @ rate[, rate] [i=N]",
// '#' starts a comment.  Reversible clauses expand to two reactions.
std::vector<Reaction> parse_network(const std::string& text);
std::string render_network(const std::vector<Reaction>& reactions);

// Jump set with rate functions: lambda_w(x) sums the intensities of all
// reactions with jump w; lambda_w(x) = 0 for x < 0.
struct TransitionSystem {
    struct Contrib {
        bool mass_action = true;
        Rational kappa;   // mass-action: kappa * x(x-1)...(x-y+1)
        double kappa_d = 0.0;
        long y = 0;       // source complex (activation threshold)
        ExprPtr expr;     // expression rates
        std::optional<long> declared_threshold;
    };

    std::vector<long> omega;                      // sorted jump sizes
    std::map<long, std::vector<Contrib>> contribs;
    std::map<long, long> i_omega;                 // activation thresholds
    long omega_plus = 0;                          // largest positive jump
    long omega_minus = 0;                         // most negative jump
    long m_star = 0;                              // omega_plus - omega_minus - 1
    bool rational_capable = true;                 // exact backend available
    bool has_expression_rates = false;
    long probe_horizon = 0;                       // activation verified up to here

    template <class T>
    T lambda(long w, long x) const {
        if (x < 0) return T(0);
        auto it = contribs.find(w);
        if (it == contribs.end()) return T(0);
        T sum(0);
        for (const auto& c : it->second) {
            if (c.mass_action) {
                if (x < c.y) continue;
                T term = from_rational<T>(c.kappa);
                for (long i = 0; i < c.y; ++i) term *= T(x - i);
                sum += term;
            } else {
                sum += eval_expr<T>(c.expr, T(x));
            }
        }
        return sum;
    }

    template <class T>
    T total_rate(long x) const {
        T sum(0);
        for (long w : omega) sum += lambda<T>(w, x);
        return sum;
    }

    long threshold(long w) const { return i_omega.at(w); }
};

// Validates (A1) (jumps of both signs) and (A2) (each rate positive exactly
// from its threshold on, probed up to `probe_horizon` for expression rates).
TransitionSystem build_transition_system(const std::vector<Reaction>& reactions,
                                         long probe_horizon = 10000);

// Convenience: parse + build.
TransitionSystem load_network(const std::string& text, long probe_horizon = 10000);

}  // namespace srn
