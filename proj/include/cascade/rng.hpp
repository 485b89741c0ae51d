// Seedable, platform-independent pseudo-random streams (SplitMix64).
//
// All randomness in the project flows through this generator so that
// instance generation, simulation, and benchmark sweeps are bit-reproducible
// across machines. The standard <random> distributions are deliberately not
// used: their output is implementation-defined.

#pragma once

#include <cstdint>

namespace cascade {

// Finalizer of SplitMix64 (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Independent stream for one simulation trial. The stream depends only on
    // (seed, trial), so a parallel run over trials draws exactly the same
    // numbers as a serial one.
    static Rng for_trial(std::uint64_t seed, std::uint64_t trial) {
        return Rng(mix64(seed ^ mix64(0x51BE7A5ED1974CA1ULL + trial)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_u01(); }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  private:
    std::uint64_t state_;
};

}  // namespace cascade
