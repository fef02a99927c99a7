#pragma once

/// Seeded randomness with a fixed, platform-independent stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are implementation-defined, so
/// bounded integers and unit reals are derived here from raw 64-bit words:
/// integers by rejection sampling (no modulo bias), reals from the top 53 bits.

#include <cstdint>
#include <random>

#include "ccsw/errors.hpp"

namespace ccsw {

using Rng = std::mt19937_64;

/// Seeds a generator from (seed, stream). Distinct streams give unrelated sequences.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

/// Uniform integer in [0, bound).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  require(bound > 0, "uniform_below: bound must be positive");
  // Largest multiple of bound representable in 2^64 arithmetic; draws at or above it are rejected.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

/// Uniform integer in [lo, hi] (inclusive).
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  require(lo <= hi, "uniform_int: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(rng());  // full 64-bit range
  return lo + static_cast<std::int64_t>(uniform_below(rng, span));
}

/// Uniform real in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace ccsw
