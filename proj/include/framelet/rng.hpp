#pragma once

#include <cstdint>

namespace framelet {

/*
 * Counter-based random numbers.
 *
 * Every draw is a pure function of (key, counter), so jitter values can be
 * generated for any lattice index in any order, on any number of threads,
 * and still come out identical. The mixer is the splitmix64 finalizer
 * (Steele/Lea/Flood), applied twice around an xor with the key.
 */

inline constexpr std::uint64_t kMixGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += kMixGamma;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Stateless draw number `counter` of the stream identified by `key`.
inline std::uint64_t counter_hash(std::uint64_t key, std::uint64_t counter) {
  return splitmix64(key ^ splitmix64(counter));
}

// Uniform double in [0, 1), 53 mantissa bits.
inline double counter_uniform01(std::uint64_t key, std::uint64_t counter) {
  return static_cast<double>(counter_hash(key, counter) >> 11) * 0x1.0p-53;
}

// Uniform double in [-1, 1). Scale by the desired half-width at the call
// site; callers that sweep an amplitude then reuse the same unit draws.
inline double counter_uniform_sym(std::uint64_t key, std::uint64_t counter) {
  return 2.0 * counter_uniform01(key, counter) - 1.0;
}

// Derives the per-(trial, level) seed from the experiment base seed.
// Chained splitmix keeps the published mixing constant the only magic number.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t trial,
                              std::uint64_t level) {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ (trial * kMixGamma));
  s = splitmix64(s ^ (level * kMixGamma));
  return s;
}

// Independent substream of a seed (e.g. index jitter vs. per-trial offset).
inline std::uint64_t subkey(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ (tag * kMixGamma));
}

}  // namespace framelet
