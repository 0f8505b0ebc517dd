#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace memnoise {

/// SplitMix64 (Vigna, public domain). Used to expand seeds and derive
/// substream states; never used to drive sampling directly.
struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

/// xoshiro256++ (Blackman/Vigna, public domain): the portable 64-bit
/// generator behind all sampling. Every noise source owns its own substream,
/// derived from (seed, stream id), so adding a source to an experiment never
/// perturbs the records of existing ones.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) : Xoshiro256pp(seed, 0) {}

    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream_id) {
        SplitMix64 outer{seed};
        SplitMix64 inner{outer.next() + 0x9e3779b97f4a7c15ULL * stream_id};
        for (auto& word : state_) word = inner.next();
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

    /// Uniform double in [0, 1), 53 significant bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double next_unit_open() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// One Box-Muller pair of independent standard normals. The pairing is
    /// rejection-free, so stream positions are a fixed function of how many
    /// pairs have been drawn.
    void next_gaussian_pair(double& g0, double& g1) {
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        g0 = r * std::cos(phi);
        g1 = r * std::sin(phi);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

/// Deterministic seed schedule for repeated runs (e.g. one seed per
/// passivity-evidence replicate) derived from a base seed.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
    SplitMix64 sm{base_seed ^ 0xd1b54a32d192ed03ULL};
    std::uint64_t folded = sm.next() + 0x9e3779b97f4a7c15ULL * (index + 1);
    SplitMix64 sm2{folded};
    return sm2.next();
}

}  // namespace memnoise
