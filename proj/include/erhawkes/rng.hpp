#pragma once

#include <cmath>
#include <cstdint>

namespace erhawkes {

// splitmix64 finalizer; also used as the mixing function for derived seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stateless mix of a seed and an index; the standard way this codebase
// derives per-replicate and per-entry streams from one master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    std::uint64_t a = splitmix64_next(s);
    return splitmix64_next(s) ^ (a << 1);
}

// Counter-based uniform for matrix entry (i, j): no generator state, any
// entry is addressable directly.
inline std::uint64_t entry_hash(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
    std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * (i + 0x100000001b3ULL * j + 1);
    return splitmix64_next(s);
}

// xoshiro256++ (Blackman & Vigna, public domain reference implementation).
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed = 1) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64_next(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

    // Knuth's product method, chunked so exp(-mean) never underflows.
    long poisson(double mean) {
        long total = 0;
        while (mean > 30.0) {
            total += poisson_small(30.0);
            mean -= 30.0;
        }
        return total + poisson_small(mean);
    }

    double normal() {
        // Box-Muller; one value per call, no cached spare.
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    long poisson_small(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        long k = 0;
        double prod = uniform01();
        while (prod > limit) {
            ++k;
            prod *= uniform01();
        }
        return k;
    }

    std::uint64_t state_[4];
};

} // namespace erhawkes
