#pragma once

#include <cstdint>
#include <random>

namespace lscp {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of sub-stream `stream` under `seed`. Distinct (seed, stream) pairs give
/// statistically independent generators; the mapping is stable across runs.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix64(mix64(seed) ^ mix64(stream ^ 0xD1B54A32D192ED03ULL));
}

[[nodiscard]] inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_seed(seed, stream));
}

/// Fixed stream identifiers used across the library.
namespace stream {
inline constexpr std::uint64_t innovations = 1;
inline constexpr std::uint64_t burn_in = 2;
inline constexpr std::uint64_t covariates = 3;
inline constexpr std::uint64_t noise = 4;
inline constexpr std::uint64_t bootstrap = 5;
inline constexpr std::uint64_t replicate = 6;
inline constexpr std::uint64_t simulation = 7;
}  // namespace stream

}  // namespace lscp
