#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fentropy {

// splitmix64 step: advances the state and returns the next output.
// Used standalone for hashing-style tasks and to expand seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with splitmix64 seed expansion. Deterministic across
// platforms: all state transitions are exact 64-bit integer arithmetic,
// and the floating-point conversions below involve no rounding ambiguity.
class Rng {
 public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    // Independent sub-stream for a numbered task. The XOR'd seed is
    // expanded through splitmix64, so adjacent indices decorrelate.
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(seed ^ index);
    }

    std::uint64_t next() {
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

    // Uniform on [0, 1): top 53 bits scaled by 2^-53.
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1): never returns 0, safe as a log argument.
    double uniform_pos() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller. The pair's second value is cached
    // so consecutive calls consume one uniform pair per two normals.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(angle);
        have_cached_ = true;
        return r * std::cos(angle);
    }

 private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace fentropy
