#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "boardcore/util.hpp"

namespace boardcore {

// xoshiro256++ seeded through splitmix64. The integer core is defined by the
// reference algorithms, so identical seeds give identical streams on every
// platform; the floating-point mappings below are fixed formulas on top of
// it. Sub-streams are derived by hashing a stream tag into the seed, one
// stream per entity class, so adding draws to one class never shifts another.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& si : s_) si = splitmix64(x);
    }

    Rng derive(const std::string& tag) const {
        return Rng(seed_fingerprint() ^ fnv1a64(tag));
    }

    std::uint64_t next_u64() {
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

    // [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Inclusive range, unbiased via 128-bit multiply-shift rejection.
    long long uniform_int(long long lo, long long hi) {
        return lo + static_cast<long long>(bounded(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Box-Muller; consumes exactly two uniforms per call.
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

  private:
    std::uint64_t s_[4];

    std::uint64_t seed_fingerprint() const {
        return s_[0] ^ rotl(s_[1], 13) ^ rotl(s_[2], 29) ^ rotl(s_[3], 47);
    }

    std::uint64_t bounded(std::uint64_t span) {
        if (span == 0) return next_u64();
        std::uint64_t threshold = (std::uint64_t(0) - span) % span;
        while (true) {
            std::uint64_t x = next_u64();
            __uint128_t m = static_cast<__uint128_t>(x) * span;
            if (static_cast<std::uint64_t>(m) >= threshold) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

}  // namespace boardcore
