#pragma once

/// Ground truth for small and moderate instances.
///
/// brute_force_front enumerates all 2^n selections and keeps, per constraint value, the
/// exact 2D Pareto set of (mu, v). greedy_front rebuilds the same per-cardinality optima
/// for the uniform-constraint model without enumeration: for any weighting
/// f_lambda(e) = lambda mu_e + (1 - lambda) var_e the best k-subset is the k smallest
/// items, and the item order only changes at the breakpoints
/// lambda_ij = (var_j - var_i) / ((mu_i - mu_j) + (var_j - var_i)) of anti-monotone pairs,
/// so one ordering per gap between breakpoints covers every optimum.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "ccsw/bit_solution.hpp"
#include "ccsw/csv.hpp"
#include "ccsw/errors.hpp"
#include "ccsw/problems.hpp"

namespace ccsw {

struct FrontPoint {
  double mu = 0.0;
  double var = 0.0;
  BitSolution witness;
};

/// 2D front sorted by mu ascending (var strictly descending).
using Front = std::vector<FrontPoint>;
/// Constraint value (or cardinality k) -> front.
using FrontMap = std::map<std::int64_t, Front>;

namespace detail {

/// Incremental 2D non-dominated set; the first witness of a duplicate vector is kept.
class FrontBuilder {
 public:
  /// Returns true if the point was added.
  bool offer(double mu, double var, const BitSolution& witness) { return offer_with(mu, var, [&] { return witness; }); }

  template <typename MakeWitness>
  bool offer_with(double mu, double var, MakeWitness&& make_witness) {
    auto it = points_.upper_bound(mu);
    if (it != points_.begin() && std::prev(it)->second.var <= var) return false;
    it = points_.lower_bound(mu);
    while (it != points_.end() && it->second.var >= var) it = points_.erase(it);
    points_.emplace(mu, FrontPoint{mu, var, make_witness()});
    return true;
  }

  [[nodiscard]] Front take() {
    Front out;
    out.reserve(points_.size());
    for (auto& [mu, p] : points_) out.push_back(std::move(p));
    points_.clear();
    return out;
  }

 private:
  std::map<double, FrontPoint> points_;
};

}  // namespace detail

inline constexpr std::size_t kBruteForceLimit = 24;

/// Exact per-constraint-value Pareto sets by enumerating every selection (n <= 24).
inline FrontMap brute_force_front(const ProblemInstance& inst) {
  const std::size_t n = inst.size();
  if (n > kBruteForceLimit) throw std::length_error("brute_force_front: refusing to enumerate more than 2^24 selections");
  std::map<std::int64_t, detail::FrontBuilder> builders;
  const std::uint64_t total = std::uint64_t{1} << n;
  BitSolution x(n);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t i = 0; i < n; ++i) x.set(i, (mask >> i) & 1U);
    const Objective3 f = evaluate(inst, x);
    builders[f.c].offer(f.mu, f.var, x);
  }
  FrontMap out;
  for (auto& [c, b] : builders) out.emplace(c, b.take());
  return out;
}

struct LambdaBreakpoints {
  std::vector<double> lambdas;    // 0 = lambda_0 < ... < lambda_{l+1} = 1
  std::vector<double> midpoints;  // (lambda_i + lambda_{i+1}) / 2
  double min_gap = 1.0;
};

namespace detail {

// Breakpoint of an anti-monotone pair (lighter variance, heavier mean) against the other item.
inline bool breakpoint_of(const StochasticWeights& w, std::size_t i, std::size_t j, double& lambda) {
  if (w.var[i] < w.var[j] && w.mu[i] > w.mu[j]) {
    lambda = (w.var[j] - w.var[i]) / ((w.mu[i] - w.mu[j]) + (w.var[j] - w.var[i]));
    return true;
  }
  if (w.var[j] < w.var[i] && w.mu[j] > w.mu[i]) return breakpoint_of(w, j, i, lambda);
  return false;
}

inline bool integral_weights(const StochasticWeights& w) {
  constexpr double limit = 9007199254740992.0;  // 2^53
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w.mu[i] != std::floor(w.mu[i]) || w.var[i] != std::floor(w.var[i]) || w.mu[i] >= limit || w.var[i] >= limit)
      return false;
  return true;
}

struct ExactLambda {
  __int128 num;
  __int128 den;
};

inline std::vector<ExactLambda> exact_breakpoints(const StochasticWeights& w) {
  std::vector<ExactLambda> out{{0, 1}};
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      std::size_t lo = i, hi = j;  // lo: smaller variance, larger mean
      if (w.var[j] < w.var[i] && w.mu[j] > w.mu[i]) std::swap(lo, hi);
      if (!(w.var[lo] < w.var[hi] && w.mu[lo] > w.mu[hi])) continue;
      const auto dv = static_cast<__int128>(w.var[hi] - w.var[lo]);
      const auto dm = static_cast<__int128>(w.mu[lo] - w.mu[hi]);
      out.push_back({dv, dm + dv});
    }
  }
  std::sort(out.begin(), out.end(), [](const ExactLambda& a, const ExactLambda& b) { return a.num * b.den < b.num * a.den; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const ExactLambda& a, const ExactLambda& b) { return a.num * b.den == b.num * a.den; }),
            out.end());
  return out;  // lambda = 1 is never an ordering start, so it is left out
}

}  // namespace detail

/// Sorted, deduplicated breakpoints of all anti-monotone item pairs, fenced by 0 and 1, with gap midpoints.
inline LambdaBreakpoints compute_breakpoints(const StochasticWeights& w) {
  require(w.size() >= 1, "compute_breakpoints: no items");
  LambdaBreakpoints bp;
  bp.lambdas.push_back(0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      double lambda = 0.0;
      if (detail::breakpoint_of(w, i, j, lambda)) bp.lambdas.push_back(lambda);
    }
  }
  bp.lambdas.push_back(1.0);
  std::sort(bp.lambdas.begin(), bp.lambdas.end());
  bp.lambdas.erase(std::unique(bp.lambdas.begin(), bp.lambdas.end()), bp.lambdas.end());
  for (std::size_t i = 0; i + 1 < bp.lambdas.size(); ++i) {
    bp.midpoints.push_back(0.5 * (bp.lambdas[i] + bp.lambdas[i + 1]));
    bp.min_gap = std::min(bp.min_gap, bp.lambdas[i + 1] - bp.lambdas[i]);
  }
  return bp;
}

/// How greedy_front breaks ties between items with equal f_lambda.
enum class GreedyTieRule { LowerIndexFirst, HigherIndexFirst };

inline constexpr double kMinBreakpointGap = 1e-12;

/// Per-cardinality union of greedy prefix optima over all breakpoint gaps, reduced to its non-dominated subset.
///
/// When two breakpoints are closer than 1e-12 the floating-point midpoints are unreliable; a
/// warning is printed and, for integer weights, item orders are recomputed exactly just to the
/// right of every breakpoint (the same orders the midpoints would produce).
inline FrontMap greedy_front(const StochasticWeights& w, GreedyTieRule tie_rule = GreedyTieRule::LowerIndexFirst) {
  const std::size_t n = w.size();
  require(n >= 1, "greedy_front: no items");
  const auto tie_less = [&](std::size_t a, std::size_t b) {
    return tie_rule == GreedyTieRule::LowerIndexFirst ? a < b : a > b;
  };

  std::vector<std::vector<std::size_t>> orders;
  const LambdaBreakpoints bp = compute_breakpoints(w);
  std::vector<std::size_t> order(n);
  if (bp.min_gap < kMinBreakpointGap) {
    std::clog << "greedy_front: breakpoint gap " << bp.min_gap << " below " << kMinBreakpointGap;
    if (detail::integral_weights(w)) {
      std::clog << ", using exact rational orderings\n";
      for (const auto& lam : detail::exact_breakpoints(w)) {
        // Order by f at lambda (scaled by den), then by slope mu - var, i.e. just right of lambda.
        const auto f = [&](std::size_t e) {
          return lam.num * static_cast<__int128>(w.mu[e]) + (lam.den - lam.num) * static_cast<__int128>(w.var[e]);
        };
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          const auto fa = f(a), fb = f(b);
          if (fa != fb) return fa < fb;
          const double sa = w.mu[a] - w.var[a], sb = w.mu[b] - w.var[b];
          if (sa != sb) return sa < sb;
          return tie_less(a, b);
        });
        orders.push_back(order);
      }
    } else {
      std::clog << ", weights are not integral; continuing with floating-point midpoints\n";
    }
  }
  if (orders.empty()) {
    for (double lambda : bp.midpoints) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double fa = lambda * w.mu[a] + (1.0 - lambda) * w.var[a];
        const double fb = lambda * w.mu[b] + (1.0 - lambda) * w.var[b];
        if (fa != fb) return fa < fb;
        return tie_less(a, b);
      });
      orders.push_back(order);
    }
  }

  std::vector<detail::FrontBuilder> builders(n + 1);
  for (const auto& ord : orders) {
    double mu = 0.0, var = 0.0;
    builders[0].offer(0.0, 0.0, BitSolution(n));
    for (std::size_t k = 1; k <= n; ++k) {
      mu += w.mu[ord[k - 1]];
      var += w.var[ord[k - 1]];
      builders[k].offer_with(mu, var, [&] {
        BitSolution x(n);
        for (std::size_t i = 0; i < k; ++i) x.set(ord[i], true);
        return x;
      });
    }
  }

  // Prefix sums accumulate in greedy order; restate every survivor with the index-ordered
  // sums that evaluate() uses so results compare bit-exactly with other oracles.
  FrontMap out;
  for (std::size_t k = 0; k <= n; ++k) {
    detail::FrontBuilder exact;
    for (auto& p : builders[k].take()) exact.offer(w.mean_of(p.witness), w.variance_of(p.witness), p.witness);
    out.emplace(static_cast<std::int64_t>(k), exact.take());
  }
  return out;
}

/// Minimum surrogate weight over a front, or +inf when empty.
inline double min_surrogate(const Front& front, const ConfidenceLevel& level) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : front) best = std::min(best, surrogate_weight(p.mu, p.var, level));
  return best;
}

/// Oracle output as CSV: k,mu,var.
inline void write_front_csv(std::ostream& out, const FrontMap& fronts) {
  out << "k,mu,var\n";
  for (const auto& [k, front] : fronts)
    for (const auto& p : front) out << k << ',' << format_double(p.mu) << ',' << format_double(p.var) << '\n';
}

}  // namespace ccsw
