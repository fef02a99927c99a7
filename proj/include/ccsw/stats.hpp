#pragma once

/// Summary statistics over repeated runs and the two-sided Mann-Whitney U test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "ccsw/errors.hpp"

namespace ccsw {

inline constexpr double kInfeasiblePenalty = 1e10;

struct SampleSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1 denominator), 0 for a single value
  std::size_t count = 0;
  std::size_t feasible = 0;
  std::vector<double> values;  // after penalty substitution
};

/// Infeasible runs contribute `penalty` in place of their value.
inline SampleSummary summarize(std::span<const double> values, double penalty, const std::vector<bool>& feasible) {
  require(values.size() == feasible.size(), "summarize: values and feasibility flags differ in length");
  SampleSummary s;
  s.count = values.size();
  s.values.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    s.values.push_back(feasible[i] ? values[i] : penalty);
    if (feasible[i]) ++s.feasible;
  }
  if (s.count == 0) return s;
  double sum = 0.0;
  for (double v : s.values) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

struct MannWhitneyResult {
  double u = 0.0;  // U statistic of the first sample: #(a > b) + #(a == b) / 2
  double p = 1.0;  // two-sided
  bool exact = false;
};

namespace detail {

// counts[u] = number of ways to interleave m and n tie-free values so that U = u.
inline std::vector<double> mann_whitney_counts(std::size_t m, std::size_t n) {
  // f(i, j, u) = f(i - 1, j, u - j) + f(i, j - 1, u): the largest value belongs to sample a
  // (beating all j values of b) or to sample b.
  std::vector<std::vector<std::vector<double>>> f(m + 1, std::vector<std::vector<double>>(n + 1));
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      auto& cell = f[i][j];
      cell.assign(i * j + 1, 0.0);
      if (i == 0 || j == 0) {
        cell[0] = 1.0;
        continue;
      }
      for (std::size_t u = 0; u <= i * j; ++u) {
        double ways = 0.0;
        if (u >= j && u - j < f[i - 1][j].size()) ways += f[i - 1][j][u - j];
        if (u < f[i][j - 1].size()) ways += f[i][j - 1][u];
        cell[u] = ways;
      }
    }
  }
  return f[m][n];
}

}  // namespace detail

inline constexpr std::size_t kExactMannWhitneyLimit = 20;

/// Auto picks the exact distribution when it applies; Exact requires tie-free samples.
enum class MannWhitneyMethod { Auto, Exact, Normal };

/// Two-sided Mann-Whitney U test.
///
/// Exact null distribution when both samples have at most 20 values and there are no ties;
/// otherwise the normal approximation with tie-corrected variance and continuity correction.
inline MannWhitneyResult mann_whitney(std::span<const double> a, std::span<const double> b,
                                      MannWhitneyMethod method = MannWhitneyMethod::Auto) {
  require(!a.empty() && !b.empty(), "mann_whitney: both samples must be non-empty");
  const std::size_t m = a.size(), n = b.size();

  MannWhitneyResult r;
  for (double x : a) {
    for (double y : b) {
      if (x > y) {
        r.u += 1.0;
      } else if (x == y) {
        r.u += 0.5;
      }
    }
  }

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
    const auto t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }

  const double mn = static_cast<double>(m) * static_cast<double>(n);
  if (method == MannWhitneyMethod::Exact) require(tie_term == 0.0, "mann_whitney: exact method needs tie-free samples");
  const bool exact = method == MannWhitneyMethod::Exact ||
                     (method == MannWhitneyMethod::Auto && tie_term == 0.0 && std::max(m, n) <= kExactMannWhitneyLimit);
  if (exact) {
    const auto counts = detail::mann_whitney_counts(m, n);
    double total = 0.0, lower = 0.0, upper = 0.0;
    for (std::size_t u = 0; u < counts.size(); ++u) {
      total += counts[u];
      if (static_cast<double>(u) <= r.u) lower += counts[u];
      if (static_cast<double>(u) >= r.u) upper += counts[u];
    }
    r.exact = true;
    r.p = std::min(1.0, 2.0 * std::min(lower, upper) / total);
    return r;
  }

  const double big_n = static_cast<double>(m + n);
  const double variance = mn / 12.0 * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
  if (variance <= 0.0) {
    r.p = 1.0;  // every value tied
    return r;
  }
  const double deviation = std::max(0.0, std::abs(r.u - mn / 2.0) - 0.5);
  const double z = deviation / std::sqrt(variance);
  r.p = std::min(1.0, std::erfc(z / std::numbers::sqrt2));
  return r;
}

inline double mann_whitney_p(std::span<const double> a, std::span<const double> b) { return mann_whitney(a, b).p; }

}  // namespace ccsw
