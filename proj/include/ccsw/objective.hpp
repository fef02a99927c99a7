#pragma once

#include <cstdint>

#include "ccsw/bit_solution.hpp"

namespace ccsw {

/// f3D(x) = (mu(x), v(x), c(x)): expected weight and variance are minimized, the constraint value maximized.
struct Objective3 {
  double mu = 0.0;
  double var = 0.0;
  std::int64_t c = 0;

  // Exact comparison: equal subsets of a shared weight table always sum to identical bits.
  friend bool operator==(const Objective3&, const Objective3&) = default;
};

/// x weakly dominates y: c(x) >= c(y), mu(x) <= mu(y), v(x) <= v(y).
constexpr bool dominates_weak_3d(const Objective3& a, const Objective3& b) noexcept {
  return a.c >= b.c && a.mu <= b.mu && a.var <= b.var;
}

/// Weak dominance with differing objective vectors.
constexpr bool dominates_strict_3d(const Objective3& a, const Objective3& b) noexcept {
  return dominates_weak_3d(a, b) && !(a == b);
}

struct Individual {
  BitSolution x;
  Objective3 obj;
};

}  // namespace ccsw
