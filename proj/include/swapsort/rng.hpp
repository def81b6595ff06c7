#pragma once

#include <cstdint>
#include <random>

namespace swapsort {

using Rng = std::mt19937_64;

/// Named substreams so that independent phases of an experiment never share draws.
enum class Stream : std::uint32_t {
  kSimulate = 0,
  kDetect = 1,
  kConvergedPhase = 2,
  kTest = 7,
};

/// Generator for run `run` of stream `stream`, derived from a single user seed.
inline Rng make_rng(std::uint64_t seed, Stream stream = Stream::kSimulate, std::uint64_t run = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(run),
                    static_cast<std::uint32_t>(run >> 32)};
  return Rng(seq);
}

/// Uniform integer in [0, bound), bound > 0. Lemire's multiply-shift with rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng& rng, double p) { return uniform_unit(rng) < p; }

}  // namespace swapsort
