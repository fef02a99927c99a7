#pragma once

/// Evolutionary algorithms over bit strings for the 3-objective chance-constrained formulation.
///
///  - run_sw_gsemo3d        sliding-window GSEMO on (mu, v, c): minimum-mu parent until the
///                          all-zeros point is found, then a window of constraint values that
///                          sweeps 0 -> B over the remaining budget.
///  - run_fast_sw_gsemo3d   adds the window half-width, schedule exponent a, the t_frac cut-over
///                          to maximum-c parents, c_max tracking and pruning below the window.
///  - run_gsemo3d / run_gsemo2d   uniform parent selection baselines.
///  - run_one_plus_one_ea   single-individual baseline on the penalized surrogate weight.
///
/// Clock convention: t counts fitness evaluations. The initial solution is evaluation 1 and
/// the offspring created in iteration t is evaluation t, so a run with budget t_max performs
/// exactly t_max evaluations. t0 is the evaluation at which mu = 0 was first seen.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <type_traits>
#include <vector>

#include "ccsw/archive.hpp"
#include "ccsw/bit_solution.hpp"
#include "ccsw/errors.hpp"
#include "ccsw/objective.hpp"
#include "ccsw/problems.hpp"
#include "ccsw/random.hpp"

namespace ccsw {

/// Parameters of the sliding-window parent selection.
struct SlidingParams {
  double t_frac = 1.0;           // fraction of the budget driven by the sliding schedule
  std::int64_t half_width = 0;   // "std": window extends this far on both sides of the schedule point
  double a = 1.0;                // schedule exponent; a < 1 spends more time on large constraint values
  std::int64_t epsilon = 0;      // c_max margin below which the late phase picks maximum-c parents
  bool track_c_max = false;      // pass c_max to the selection (enables pruning below the window)

  /// std = 0, t_frac = 1, a = 1, c_max = -1.
  static SlidingParams sw_defaults() { return {}; }
  /// t_frac = 0.9, std = 10, a = 0.5, epsilon = 0 with c_max tracking.
  static SlidingParams fast_defaults() { return {0.9, 10, 0.5, 0, true}; }

  void validate() const {
    if (!(t_frac >= 0.0 && t_frac <= 1.0)) throw ConfigError("t_frac must lie in [0, 1]");
    if (!(a > 0.0 && a <= 1.0)) throw ConfigError("schedule exponent a must lie in (0, 1]");
    if (half_width < 0) throw ConfigError("window half-width must be non-negative");
    if (epsilon < 0) throw ConfigError("epsilon must be non-negative");
  }
};

struct Window {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  friend bool operator==(const Window&, const Window&) = default;
};

/// Constraint-value window for time t of t_max.
///
/// While t <= t_frac * t_max the schedule point is c = (t^a / (t_frac * t_max)^a) * B and the
/// window is [floor(c) - std, ceil(c) + std]; afterwards it is [B - std, B]. The result is
/// clamped to [0, B].
inline Window sliding_window(std::int64_t t, std::int64_t t_max, std::int64_t bound, const SlidingParams& p) {
  require(t >= 1 && t_max >= 1 && bound >= 0, "sliding_window: need t >= 1, t_max >= 1, B >= 0");
  const double horizon = p.t_frac * static_cast<double>(t_max);
  Window w;
  if (static_cast<double>(t) <= horizon) {
    double c_hat = (std::pow(static_cast<double>(t), p.a) / std::pow(horizon, p.a)) * static_cast<double>(bound);
    // Snap rounding noise near integers.
    const double nearest = std::round(c_hat);
    if (std::abs(c_hat - nearest) <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, c_hat)) c_hat = nearest;
    w.lo = static_cast<std::int64_t>(std::floor(c_hat)) - p.half_width;
    w.hi = static_cast<std::int64_t>(std::ceil(c_hat)) + p.half_width;
  } else {
    w.lo = bound - p.half_width;
    w.hi = bound;
  }
  w.lo = std::max<std::int64_t>(w.lo, 0);
  w.hi = std::min<std::int64_t>(w.hi, bound);
  return w;
}

// ---------------------------------------------------------------------------
// Mutation

/// Positions flipped by one round of standard bit mutation (each bit independently with probability 1/n).
/// Gaps between flips are geometric, so the cost is proportional to the number of flips.
inline void sample_flip_positions(std::size_t n, Rng& rng, std::vector<std::size_t>& out) {
  out.clear();
  if (n == 0) return;
  if (n == 1) {
    out.push_back(0);
    return;
  }
  const double log_keep = std::log1p(-1.0 / static_cast<double>(n));
  std::size_t pos = 0;
  for (;;) {
    const double skip = std::floor(std::log1p(-uniform_unit(rng)) / log_keep);
    if (skip >= static_cast<double>(n - pos)) return;
    pos += static_cast<std::size_t>(skip);
    out.push_back(pos);
    ++pos;
    if (pos >= n) return;
  }
}

struct Mutation {
  BitSolution child;
  std::vector<std::size_t> flipped;  // ascending, non-empty
};

/// Standard bit mutation repeated until the offspring differs from the parent.
inline Mutation mutate_plus(const BitSolution& parent, Rng& rng) {
  require(parent.size() >= 1, "mutate_plus: empty bit string");
  Mutation m{parent, {}};
  do {
    sample_flip_positions(parent.size(), rng, m.flipped);
  } while (m.flipped.empty());
  for (auto i : m.flipped) m.child.flip(i);
  return m;
}

// ---------------------------------------------------------------------------
// Runs

enum class Init { Zeros, Random };

inline BitSolution initial_solution(std::size_t n, Init init, Rng& rng) {
  BitSolution x(n);
  if (init == Init::Random) {
    for (std::size_t base = 0; base < n; base += 64) {
      const std::uint64_t word = rng();
      for (std::size_t b = 0; b < 64 && base + b < n; ++b) x.set(base + b, (word >> b) & 1U);
    }
  }
  return x;
}

enum class SelectionMode { MinMu, Sliding, MaxC, Uniform };

/// One iteration of a population-based run.
struct TraceRecord {
  std::int64_t t = 0;
  SelectionMode mode = SelectionMode::Uniform;
  Window window{-1, -1};  // only meaningful for SelectionMode::Sliding
  std::size_t pool_size = 0;
  std::size_t pruned = 0;
  Objective3 offspring;
  InsertOutcome outcome = InsertOutcome::Rejected;
  std::size_t archive_size = 0;  // after insertion
  std::int64_t c_max = -1;
  double mu_min = 0.0;
  std::int64_t t0 = -1;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

inline const char* to_string(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::MinMu: return "min_mu";
    case SelectionMode::Sliding: return "sliding";
    case SelectionMode::MaxC: return "max_c";
    case SelectionMode::Uniform: return "uniform";
  }
  return "?";
}

struct RunOptions {
  /// Called after every iteration (not for the initial evaluation).
  std::function<void(const TraceRecord&)> trace;
  /// Called after every iteration of a 3D run with the live archive.
  std::function<void(std::int64_t t, const ParetoArchive<Identity3D>&)> observe;
};

struct RunResult {
  std::vector<Individual> population;  // final archive, (c, mu) order, true objectives
  std::vector<std::size_t> max_size_by_c;
  std::size_t max_population = 0;   // largest archive size seen
  std::size_t max_window_pool = 0;  // largest sliding-window pool a parent was drawn from
  std::int64_t t0 = -1;
  std::int64_t c_max = -1;
  double mu_min = 0.0;
  std::int64_t evaluations = 0;
};

namespace detail {

struct LoopState {
  std::int64_t t = 1;
  std::int64_t t0 = -1;
  double mu_min = 0.0;
  std::int64_t c_max = -1;
};

// Shared evaluate / insert / bookkeeping loop. `select(state, archive, record)` picks the
// parent for iteration state.t and fills the selection fields of `record`.
template <typename Projection, typename Select>
RunResult run_population(const ProblemInstance& inst, std::int64_t t_max, Init init, Rng& rng, Projection projection,
                         bool track_c_max, const RunOptions& options, Select&& select) {
  require(t_max >= 1, "run: budget t_max must be at least 1");
  require(inst.size() >= 1, "run: instance is empty");
  const std::int64_t bound = inst.bound();

  ParetoArchive<Projection> archive(projection);
  RunResult result;
  LoopState state;

  BitSolution x0 = initial_solution(inst.size(), init, rng);
  Objective3 f0 = evaluate(inst, x0);
  result.evaluations = 1;
  state.mu_min = f0.mu;
  if (track_c_max && f0.c > state.c_max && f0.c <= bound) state.c_max = f0.c;
  if (state.mu_min == 0.0) state.t0 = state.t;
  archive.try_insert({std::move(x0), f0});

  while (state.t < t_max) {
    ++state.t;
    TraceRecord record;
    record.t = state.t;
    const Selection sel = select(state, archive, record);
    record.pool_size = sel.pool_size;
    if (record.mode == SelectionMode::Sliding) result.max_window_pool = std::max(result.max_window_pool, sel.pool_size);

    Mutation m = mutate_plus(sel.individual->x, rng);
    const Objective3 f = evaluate_offspring(inst, *sel.individual, m.child, m.flipped);
    ++result.evaluations;

    if (f.mu < state.mu_min) state.mu_min = f.mu;
    if (state.t0 == -1 && state.mu_min == 0.0) state.t0 = state.t;
    if (track_c_max && f.c > state.c_max && f.c <= bound) state.c_max = f.c;

    record.outcome = archive.try_insert({std::move(m.child), f});
    record.offspring = f;
    record.archive_size = archive.size();
    record.c_max = state.c_max;
    record.mu_min = state.mu_min;
    record.t0 = state.t0;
    if (options.trace) options.trace(record);
    if constexpr (std::is_same_v<Projection, Identity3D>) {
      if (options.observe) options.observe(state.t, archive);
    }
  }

  result.population = archive.snapshot();
  result.max_size_by_c = archive.max_size_by_c();
  result.max_population = archive.max_size();
  result.t0 = state.t0;
  result.c_max = state.c_max;
  result.mu_min = state.mu_min;
  return result;
}

}  // namespace detail

/// Sliding-window GSEMO on f3D with std = 0, t_frac = 1, a = 1 and pruning disabled.
inline RunResult run_sw_gsemo3d(const ProblemInstance& inst, std::int64_t t_max, Init init, Rng& rng,
                                const RunOptions& options = {}) {
  const SlidingParams params = SlidingParams::sw_defaults();
  const std::int64_t bound = inst.bound();
  return detail::run_population(
      inst, t_max, init, rng, Identity3D{}, false, options,
      [&](const detail::LoopState& s, ParetoArchive<Identity3D>& archive, TraceRecord& rec) -> Selection {
        if (s.t0 == -1) {
          rec.mode = SelectionMode::MinMu;
          return archive.select_min_mu(rng);
        }
        rec.mode = SelectionMode::Sliding;
        rec.window = sliding_window(s.t - s.t0, t_max - s.t0, bound, params);
        rec.pruned = archive.prune_below(rec.window.lo, -1);
        return archive.select_window(rec.window.lo, rec.window.hi, rng);
      });
}

/// Fast sliding-window GSEMO on f3D with user-chosen schedule parameters.
inline RunResult run_fast_sw_gsemo3d(const ProblemInstance& inst, std::int64_t t_max, const SlidingParams& params,
                                     Init init, Rng& rng, const RunOptions& options = {}) {
  params.validate();
  const std::int64_t bound = inst.bound();
  const double horizon = params.t_frac * static_cast<double>(t_max);
  return detail::run_population(
      inst, t_max, init, rng, Identity3D{}, params.track_c_max, options,
      [&](const detail::LoopState& s, ParetoArchive<Identity3D>& archive, TraceRecord& rec) -> Selection {
        const auto t = static_cast<double>(s.t);
        if (s.t0 == -1 && t <= horizon) {
          rec.mode = SelectionMode::MinMu;
          return archive.select_min_mu(rng);
        }
        if (t > horizon && s.c_max < bound - params.epsilon) {
          rec.mode = SelectionMode::MaxC;
          return archive.select_max_c(rng);
        }
        rec.mode = SelectionMode::Sliding;
        rec.window = sliding_window(s.t - s.t0, t_max - s.t0, bound, params);
        rec.pruned = archive.prune_below(rec.window.lo, s.c_max);
        return archive.select_window(rec.window.lo, rec.window.hi, rng);
      });
}

/// GSEMO on f3D: uniform parent selection over the whole archive.
inline RunResult run_gsemo3d(const ProblemInstance& inst, std::int64_t t_max, Init init, Rng& rng,
                             const RunOptions& options = {}) {
  return detail::run_population(inst, t_max, init, rng, Identity3D{}, false, options,
                                [&](const detail::LoopState&, ParetoArchive<Identity3D>& archive, TraceRecord& rec) {
                                  rec.mode = SelectionMode::Uniform;
                                  return archive.select_uniform(rng);
                                });
}

/// Penalty for the bi-objective model, large enough that one more dominated node outweighs
/// any difference in either objective.
inline double gsemo2d_penalty(const StochasticWeights& w, double k_max) {
  return std::max(w.total_mean(), w.total_variance()) + k_max * std::sqrt(w.total_variance()) + 1.0;
}

/// Penalty for the single-objective surrogate: exceeds the largest possible mu + K_max sqrt(v).
inline double surrogate_penalty(const StochasticWeights& w, double k_max) {
  return w.total_mean() + k_max * std::sqrt(w.total_variance()) + 1.0;
}

/// GSEMO on (mu + R (B - c), v + R (B - c)), both minimized.
inline RunResult run_gsemo2d(const ProblemInstance& inst, std::int64_t t_max, Init init, Rng& rng, double penalty_r,
                             const RunOptions& options = {}) {
  require(penalty_r > 0.0, "run_gsemo2d: penalty must be positive");
  return detail::run_population(inst, t_max, init, rng, Penalized2D{inst.bound(), penalty_r}, false, options,
                                [&](const detail::LoopState&, ParetoArchive<Penalized2D>& archive, TraceRecord& rec) {
                                  rec.mode = SelectionMode::Uniform;
                                  return archive.select_uniform(rng);
                                });
}

struct SingleRunResult {
  Individual best;
  double fitness = 0.0;  // mu + K sqrt(v) + R (B - c)
  std::int64_t evaluations = 0;
};

/// (1+1) EA minimizing the penalized surrogate weight for one confidence level; ties are accepted.
inline SingleRunResult run_one_plus_one_ea(const ProblemInstance& inst, const ConfidenceLevel& level,
                                           std::int64_t t_max, Rng& rng, double penalty_r,
                                           Init init = Init::Random) {
  require(t_max >= 1, "run_one_plus_one_ea: budget t_max must be at least 1");
  require(inst.size() >= 1, "run_one_plus_one_ea: instance is empty");
  const auto fitness = [&](const Objective3& o) {
    return surrogate_weight(o, level) + penalty_r * static_cast<double>(inst.bound() - o.c);
  };

  SingleRunResult r;
  r.best.x = initial_solution(inst.size(), init, rng);
  r.best.obj = evaluate(inst, r.best.x);
  r.fitness = fitness(r.best.obj);
  r.evaluations = 1;
  for (std::int64_t t = 2; t <= t_max; ++t) {
    Mutation m = mutate_plus(r.best.x, rng);
    const Objective3 f = evaluate_offspring(inst, r.best, m.child, m.flipped);
    ++r.evaluations;
    const double value = fitness(f);
    if (value <= r.fitness) {
      r.best = {std::move(m.child), f};
      r.fitness = value;
    }
  }
  return r;
}

}  // namespace ccsw
