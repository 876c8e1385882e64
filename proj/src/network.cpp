#include "srn/network.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace srn {
namespace {

struct LineScanner {
    const std::string& s;
    int line;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    int col() const { return static_cast<int>(pos) + 1; }
    bool accept(const std::string& tok) {
        skip_ws();
        if (s.compare(pos, tok.size(), tok) == 0) {
            pos += tok.size();
            return true;
        }
        return false;
    }
    void expect(const std::string& tok, const std::string& what) {
        if (!accept(tok))
            throw ParseError("expected " + what, line, col());
    }

    long integer() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw ParseError("expected an integer", line, col());
        return std::stol(s.substr(start, pos - start));
    }

    // complex := INT? 'S' | '0'
    long complex() {
        skip_ws();
        if (pos < s.size() && s[pos] == '0' &&
            (pos + 1 >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos + 1])))) {
            // bare zero complex (but "0S" would be 0 molecules of S -> also 0)
            if (pos + 1 < s.size() && s[pos + 1] == 'S') {
                pos += 2;
                return 0;
            }
            ++pos;
            return 0;
        }
        long n = 1;
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) n = integer();
        skip_ws();
        if (pos >= s.size() || s[pos] != 'S')
            throw ParseError("expected a complex like '2S' or '0'", line, col());
        ++pos;
        return n;
    }

    RateSpec rate() {
        skip_ws();
        if (accept("expr")) {
            expect("(", "'(' after expr");
            // scan to the matching close paren
            int depth = 1;
            size_t start = pos;
            while (pos < s.size() && depth > 0) {
                if (s[pos] == '(') ++depth;
                if (s[pos] == ')') --depth;
                ++pos;
            }
            if (depth != 0) throw ParseError("unbalanced parentheses in expr(...)", line, col());
            std::string body = s.substr(start, pos - 1 - start);
            RateSpec r;
            r.kind = RateSpec::Kind::Expression;
            r.expr = parse_expression(body, line, static_cast<int>(start));
            return r;
        }
        size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                                  s[pos] == '.' || s[pos] == 'e' || s[pos] == 'E' ||
                                  ((s[pos] == '+' || s[pos] == '-') && pos > start &&
                                   (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
            ++pos;
        if (pos == start) throw ParseError("expected a rate constant or expr(...)", line, col());
        RateSpec r;
        r.kind = RateSpec::Kind::MassAction;
        r.kappa = rational_from_decimal(s.substr(start, pos - start));
        if (!(r.kappa > 0))
            throw ParseError("rate constant must be positive", line, static_cast<int>(start) + 1);
        return r;
    }
};

}  // namespace

std::vector<Reaction> parse_network(const std::string& text) {
    std::vector<Reaction> out;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        LineScanner sc{raw, lineno};
        if (sc.done()) continue;

        long src = sc.complex();
        bool reversible;
        if (sc.accept("<->"))
            reversible = true;
        else if (sc.accept("->"))
            reversible = false;
        else
            throw ParseError("expected '->' or '<->'", lineno, sc.col());
        long dst = sc.complex();
        sc.expect("@", "'@' before the rate");

        RateSpec fwd = sc.rate();
        std::optional<RateSpec> bwd;
        if (sc.accept(",")) bwd = sc.rate();
        if (reversible && !bwd)
            throw ParseError("reversible clause needs two rates 'k1, k2'", lineno, sc.col());
        if (!reversible && bwd)
            throw ParseError("one-way clause takes a single rate", lineno, sc.col());

        std::optional<long> declared;
        if (sc.accept("i")) {
            sc.expect("=", "'=' after i");
            declared = sc.integer();
        }
        if (!sc.done()) throw ParseError("trailing input", lineno, sc.col());

        if (src == dst)
            throw ParseError("reaction has zero jump (source equals target)", lineno, 1);

        fwd.declared_threshold = declared;
        out.push_back({src, dst, fwd});
        if (bwd) {
            bwd->declared_threshold = declared;
            out.push_back({dst, src, *bwd});
        }
    }
    return out;
}

std::string render_network(const std::vector<Reaction>& reactions) {
    std::ostringstream os;
    for (const auto& r : reactions) {
        auto complex = [](long n) {
            return n == 0 ? std::string("0")
                          : (n == 1 ? std::string("S") : std::to_string(n) + "S");
        };
        os << complex(r.source) << " -> " << complex(r.target) << " @ ";
        if (r.rate.kind == RateSpec::Kind::MassAction)
            os << scalar_to_string(r.rate.kappa);
        else
            os << "expr(" << render_expression(r.rate.expr) << ")";
        if (r.rate.declared_threshold) os << " i=" << *r.rate.declared_threshold;
        os << "\n";
    }
    return os.str();
}

namespace {

// Probe one jump's summed rate on [0, horizon]: find the activation threshold
// and verify positivity holds from there on (A2), in exact arithmetic when the
// contributions allow it.
template <class T>
long probe_threshold(const TransitionSystem& ts, long w, long horizon) {
    long first_pos = -1;
    for (long x = 0; x <= horizon; ++x) {
        T v = ts.lambda<T>(w, x);
        if (v < T(0))
            throw AssumptionError("rate for jump " + std::to_string(w) + " is negative at x=" +
                                  std::to_string(x));
        bool pos = v > T(0);
        if (first_pos < 0) {
            if (pos) first_pos = x;
        } else if (!pos) {
            throw AssumptionError("(A2): rate for jump " + std::to_string(w) +
                                  " vanishes at x=" + std::to_string(x) +
                                  " above its activation state " + std::to_string(first_pos));
        }
    }
    if (first_pos < 0)
        throw AssumptionError("(A2): rate for jump " + std::to_string(w) +
                              " is never positive on the probed range [0," +
                              std::to_string(horizon) + "]");
    return first_pos;
}

}  // namespace

TransitionSystem build_transition_system(const std::vector<Reaction>& reactions,
                                         long probe_horizon) {
    if (reactions.empty()) throw ParseError("no reactions given");
    TransitionSystem ts;
    ts.probe_horizon = probe_horizon;

    for (const auto& r : reactions) {
        long w = r.target - r.source;
        TransitionSystem::Contrib c;
        if (r.rate.kind == RateSpec::Kind::MassAction) {
            c.mass_action = true;
            c.kappa = r.rate.kappa;
            c.kappa_d = to_double(r.rate.kappa);
            c.y = r.source;
        } else {
            c.mass_action = false;
            c.expr = r.rate.expr;
            ts.has_expression_rates = true;
            if (!rational_capable(r.rate.expr)) ts.rational_capable = false;
        }
        c.declared_threshold = r.rate.declared_threshold;
        ts.contribs[w].push_back(c);
    }

    bool any_pos = false, any_neg = false;
    for (const auto& [w, _] : ts.contribs) {
        ts.omega.push_back(w);
        any_pos |= w > 0;
        any_neg |= w < 0;
    }
    std::sort(ts.omega.begin(), ts.omega.end());
    if (!any_pos) throw AssumptionError("(A1): no reaction with a positive jump");
    if (!any_neg) throw AssumptionError("(A1): no reaction with a negative jump");
    ts.omega_minus = ts.omega.front();
    ts.omega_plus = ts.omega.back();
    ts.m_star = ts.omega_plus - ts.omega_minus - 1;

    for (const auto& [w, cs] : ts.contribs) {
        bool pure_mass_action = true, exact_ok = true;
        for (const auto& c : cs) {
            pure_mass_action &= c.mass_action;
            exact_ok &= c.mass_action || rational_capable(c.expr);
        }
        long iw;
        if (pure_mass_action) {
            iw = cs.front().y;
            for (const auto& c : cs) iw = std::min(iw, c.y);
        } else {
            iw = exact_ok ? probe_threshold<Rational>(ts, w, probe_horizon)
                          : probe_threshold<double>(ts, w, probe_horizon);
        }
        for (const auto& c : cs) {
            if (!c.mass_action && c.declared_threshold) {
                // verify the declaration against the contribution itself
                auto val0 = eval_expr<double>(c.expr, double(*c.declared_threshold));
                if (!(val0 > 0))
                    throw AssumptionError("declared i=" + std::to_string(*c.declared_threshold) +
                                          " but the rate is not positive there");
                for (long x = 0; x < *c.declared_threshold; ++x)
                    if (eval_expr<double>(c.expr, double(x)) != 0)
                        throw AssumptionError("declared i=" +
                                              std::to_string(*c.declared_threshold) +
                                              " but the rate is non-zero at x=" +
                                              std::to_string(x));
            }
        }
        if (iw + w < 0)
            throw AssumptionError("jump " + std::to_string(w) + " is active from x=" +
                                  std::to_string(iw) + ", which would leave the state space");
        ts.i_omega[w] = iw;
    }
    return ts;
}

TransitionSystem load_network(const std::string& text, long probe_horizon) {
    return build_transition_system(parse_network(text), probe_horizon);
}

}  // namespace srn
