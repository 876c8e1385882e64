#pragma once
// Exact stochastic simulation of the jump chain, reported as the fraction of
// time spent in each state over an observation window.  Deterministic for a
// fixed seed.

#include <srn/network.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace srn {

// xoshiro256++ with splitmix64 seeding.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) {
            x += 0x9E3779B97F4A7C15ull;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            w = z ^ (z >> 31);
        }
    }
    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }
    // Uniform on (0,1): never 0, so -log is safe.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    std::uint64_t s_[4] = {};
};

struct SsaOptions {
    long x0 = 0;
    double t_total = 1e5;
    double t_burn = 0.0; // occupancy counted over (t_burn, t_total]
    std::uint64_t seed = 1;
    std::uint64_t max_events = 1ull << 34;
    long max_state = 50'000'000; // guard against runaway excursions
};

struct SsaResult {
    std::map<long, double> occupancy; // state -> fraction of the window
    double window = 0.0;
    std::uint64_t events = 0;
    std::string termination; // "time" | "max-events" | "stuck" | "state-bound"
    long x_final = 0;
};

SsaResult ssa_occupancy(const TransitionSystem& ts, const SsaOptions& opt);

// Total variation distance between an empirical occupancy map and a reference
// distribution given on states 0..ref.size()-1 (missing states count as 0).
double total_variation(const std::map<long, double>& emp, const std::vector<double>& ref);

} // namespace srn
