#pragma once

#include <gmpxx.h>

#include <cstdint>

#include "rational.hpp"

namespace bclab {

/// Counter-based deterministic generator. Every output is a pure function of
/// (seed, stream, counter), so Monte Carlo shards can be evaluated in any
/// order and merged. Algorithm identifier: "splitmix64-counter-v1".
inline constexpr const char* kRngAlgorithm = "splitmix64-counter-v1";

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class CounterRng {
   public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(splitmix64(seed ^ splitmix64(stream))), counter_(0) {}

    std::uint64_t next_u64() { return splitmix64(key_ + ++counter_); }

    /// Uniform in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) {
        // Rejection keeps the distribution exact.
        std::uint64_t limit = bound * ((~0ULL) / bound);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    /// Dyadic point in [0,1) with `bits` random bits.
    Int next_fixed_point(unsigned bits) {
        Int x = 0;
        for (unsigned got = 0; got < bits; got += 64) {
            x <<= 64;
            x |= Int(static_cast<unsigned long>(next_u64()));
        }
        if (bits % 64 != 0) x >>= (64 - bits % 64);
        return x;
    }

    /// Dyadic rational in [0,1) with 64 bits.
    Rat next_unit_rat() {
        Rat r(Int(static_cast<unsigned long>(next_u64())), Int(1) << 64);
        r.canonicalize();
        return r;
    }

   private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace bclab
