#pragma once

#include <cstdint>

// Counter-based random streams. Every draw is a pure function of
// (seed, counter), so parallel and serial runs produce identical values
// no matter how work is scheduled across threads.

namespace bitfade::rng {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer (Vigna). Bijective on 64-bit words.
inline constexpr std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

// Random 64-bit word at position `index` of the stream identified by `seed`.
inline constexpr std::uint64_t word_at(std::uint64_t seed, std::uint64_t index) {
    return mix(seed + (index + 1) * kGamma);
}

// Derive a child seed from a parent seed and a stream label. Chain calls
// to key a stream by several labels, e.g. derive(derive(s, node), block).
inline constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t label) {
    return mix(seed ^ word_at(label, 0));
}

// Uniform double in [0, 1) from a random word (53 mantissa bits).
inline constexpr double to_unit(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// Sequential view over a counter stream, for bulk fills.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_word() { return word_at(seed_, counter_++); }
    double next_unit() { return to_unit(next_word()); }
    bool next_bit() { return (next_word() >> 63) != 0; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace bitfade::rng
