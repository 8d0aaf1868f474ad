#pragma once

#include <cstdint>

namespace tmk {

// SplitMix64. Chosen because the w-th output is a pure function of the seed,
// which gives random access into a digit stream and trivially splittable
// substreams for Monte Carlo sampling. See README for the reproducibility
// contract.
namespace rng {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// w-th 64-bit word of the stream with the given seed.
inline std::uint64_t stream_word(std::uint64_t seed, std::uint64_t w) {
    return mix64(seed + w * 0x9E3779B97F4A7C15ull);
}

/// Seed of the idx-th independent substream.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t idx) {
    return mix64(mix64(seed) + idx);
}

}  // namespace rng
}  // namespace tmk
