#pragma once

#include <array>
#include <cstdint>

namespace stsperf {

// splitmix64 output mixer (Steele, Lea & Flood). Stateless: returns the
// mixed value for an already-advanced internal counter.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// The i-th output (i >= 0) of a splitmix64 sequence started at `seed`.
// O(1): splitmix64 just mixes seed + (i+1) * gamma.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t i) {
    return splitmix64_mix(seed + (i + 1) * 0x9E3779B97F4A7C15ull);
}

// Deterministic random stream: xoshiro256++ (Blackman & Vigna), 256-bit
// state expanded from a 64-bit seed through splitmix64. Period 2^256 - 1.
// Copyable value type; a copy continues the sequence independently, which
// tests use to snapshot stream state.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm += 0x9E3779B97F4A7C15ull;
            word = splitmix64_mix(sm);
        }
    }

    // Independent stream for replication `index`: seeded by the index-th
    // splitmix64 output of `seed`, so any replication can be (re)started
    // without generating its predecessors.
    static RngStream for_replication(std::uint64_t seed, std::uint64_t index) {
        return RngStream(splitmix64_at(seed, index));
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

    // Uniform draw in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool operator==(const RngStream&) const = default;

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_;
};

} // namespace stsperf
