#pragma once

/// Pareto archive of mutually non-dominating individuals, bucketed by constraint value.
///
/// Acceptance follows the GSEMO rule: an offspring enters unless some member strictly
/// dominates it, and on entry it evicts every member it weakly dominates (including an
/// exact duplicate). Each bucket holds one constraint value and is a strict 2D front:
/// mu ascending, var strictly descending. That ordering turns both the rejection test
/// and the eviction sweep into binary searches per bucket.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <vector>

#include "ccsw/csv.hpp"
#include "ccsw/errors.hpp"
#include "ccsw/objective.hpp"
#include "ccsw/random.hpp"

namespace ccsw {

/// Dominance on the full triple (mu, v, c).
struct Identity3D {
  constexpr Objective3 operator()(const Objective3& o) const noexcept { return o; }
};

/// Bi-objective view: both mu and v carry penalty * (B - c); the constraint dimension collapses to 0.
struct Penalized2D {
  std::int64_t bound = 0;
  double penalty = 0.0;

  Objective3 operator()(const Objective3& o) const noexcept {
    const double p = penalty * static_cast<double>(bound - o.c);
    return {o.mu + p, o.var + p, 0};
  }
};

enum class InsertOutcome { Accepted, Rejected };

/// Result of a parent selection: the chosen member and the size of the pool it was drawn from.
struct Selection {
  const Individual* individual = nullptr;
  std::size_t pool_size = 0;
  bool fallback = false;  // window was empty, drawn from the whole archive
};

template <typename Projection = Identity3D>
class ParetoArchive {
 public:
  struct Entry {
    Individual ind;
    Objective3 key;  // projected objectives used for dominance
  };

  ParetoArchive() = default;
  explicit ParetoArchive(Projection projection) : projection_(projection) {}

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool empty() const noexcept { return size_ == 0; }
  [[nodiscard]] const Projection& projection() const noexcept { return projection_; }

  /// Largest bucket size ever seen per (projected) constraint value.
  [[nodiscard]] const std::vector<std::size_t>& max_size_by_c() const noexcept { return max_size_by_c_; }
  [[nodiscard]] std::size_t max_size() const noexcept { return max_size_; }

  InsertOutcome try_insert(Individual y) {
    const Objective3 key = projection_(y.obj);
    require(key.c >= 0, "ParetoArchive::try_insert: constraint value must be non-negative");

    for (auto it = buckets_.lower_bound(key.c); it != buckets_.end(); ++it) {
      const auto& bucket = it->second;
      // Among members with mu <= key.mu the last one has the smallest variance.
      auto pos = std::upper_bound(bucket.begin(), bucket.end(), key.mu,
                                  [](double mu, const Entry& e) { return mu < e.key.mu; });
      if (pos == bucket.begin()) continue;
      const Entry& best = *std::prev(pos);
      if (best.key.var <= key.var && !(best.key == key)) return InsertOutcome::Rejected;
    }

    for (auto it = buckets_.begin(); it != buckets_.end() && it->first <= key.c;) {
      auto& bucket = it->second;
      auto first = std::lower_bound(bucket.begin(), bucket.end(), key.mu,
                                    [](const Entry& e, double mu) { return e.key.mu < mu; });
      auto last = first;
      while (last != bucket.end() && last->key.var >= key.var) ++last;
      size_ -= static_cast<std::size_t>(last - first);
      bucket.erase(first, last);
      it = bucket.empty() ? buckets_.erase(it) : std::next(it);
    }

    auto& bucket = buckets_[key.c];
    auto pos = std::lower_bound(bucket.begin(), bucket.end(), key.mu,
                                [](const Entry& e, double mu) { return e.key.mu < mu; });
    bucket.insert(pos, Entry{std::move(y), key});
    ++size_;

    const auto c = static_cast<std::size_t>(key.c);
    if (max_size_by_c_.size() <= c) max_size_by_c_.resize(c + 1, 0);
    max_size_by_c_[c] = std::max(max_size_by_c_[c], bucket.size());
    max_size_ = std::max(max_size_, size_);
    return InsertOutcome::Accepted;
  }

  /// Number of members with lo <= c <= hi.
  [[nodiscard]] std::size_t count_in(std::int64_t lo, std::int64_t hi) const {
    std::size_t total = 0;
    if (lo > hi) return 0;
    for (auto it = buckets_.lower_bound(lo); it != buckets_.end() && it->first <= hi; ++it) total += it->second.size();
    return total;
  }

  /// Uniform member with c in [lo, hi]; uniform over the whole archive when that window is empty.
  Selection select_window(std::int64_t lo, std::int64_t hi, Rng& rng) const {
    require(!empty(), "select_window: archive is empty");
    const std::size_t pool = count_in(lo, hi);
    if (pool == 0) {
      Selection s = select_uniform(rng);
      s.fallback = true;
      return s;
    }
    auto index = static_cast<std::size_t>(uniform_below(rng, pool));
    for (auto it = buckets_.lower_bound(lo);; ++it) {
      if (index < it->second.size()) return {&it->second[index].ind, pool, false};
      index -= it->second.size();
    }
  }

  Selection select_uniform(Rng& rng) const {
    require(!empty(), "select_uniform: archive is empty");
    auto index = static_cast<std::size_t>(uniform_below(rng, size_));
    for (const auto& [c, bucket] : buckets_) {
      if (index < bucket.size()) return {&bucket[index].ind, size_, false};
      index -= bucket.size();
    }
    throw ContractViolation("select_uniform: size bookkeeping is inconsistent");
  }

  /// A member of minimum (projected) mu, ties broken uniformly at random.
  Selection select_min_mu(Rng& rng) const {
    require(!empty(), "select_min_mu: archive is empty");
    // mu is strictly increasing inside a bucket, so only bucket heads can attain the minimum.
    std::vector<const Individual*> ties;
    double best = 0.0;
    for (const auto& [c, bucket] : buckets_) {
      const Entry& head = bucket.front();
      if (ties.empty() || head.key.mu < best) {
        ties.assign(1, &head.ind);
        best = head.key.mu;
      } else if (head.key.mu == best) {
        ties.push_back(&head.ind);
      }
    }
    return {ties[uniform_below(rng, ties.size())], ties.size(), false};
  }

  /// A member of maximum constraint value, ties broken uniformly at random.
  Selection select_max_c(Rng& rng) const {
    require(!empty(), "select_max_c: archive is empty");
    const auto& bucket = buckets_.rbegin()->second;
    return {&bucket[uniform_below(rng, bucket.size())].ind, bucket.size(), false};
  }

  /// Removes members with c < lo and c != keep_c; disabled when keep_c == -1 and never empties the archive.
  std::size_t prune_below(std::int64_t lo, std::int64_t keep_c) {
    if (keep_c == -1) return 0;
    std::size_t removed = 0;
    for (auto it = buckets_.begin(); it != buckets_.end() && it->first < lo;) {
      if (it->first == keep_c) {
        ++it;
        continue;
      }
      auto& bucket = it->second;
      while (!bucket.empty() && size_ > 1) {
        bucket.pop_back();
        --size_;
        ++removed;
      }
      if (!bucket.empty()) break;  // size guard reached
      it = buckets_.erase(it);
    }
    return removed;
  }

  /// Highest constraint value present, -1 when empty.
  [[nodiscard]] std::int64_t max_c() const noexcept { return buckets_.empty() ? -1 : buckets_.rbegin()->first; }

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& [c, bucket] : buckets_)
      for (const auto& e : bucket) f(e.ind);
  }

  /// f(c, span<const Entry>) for every non-empty bucket in increasing c.
  template <typename F>
  void for_each_bucket(F&& f) const {
    for (const auto& [c, bucket] : buckets_) f(c, std::span<const Entry>(bucket));
  }

  /// Members ordered by (c, mu).
  [[nodiscard]] std::vector<Individual> snapshot() const {
    std::vector<Individual> out;
    out.reserve(size_);
    for_each([&](const Individual& ind) { out.push_back(ind); });
    return out;
  }

 private:
  Projection projection_{};
  std::map<std::int64_t, std::vector<Entry>> buckets_;
  std::size_t size_ = 0;
  std::size_t max_size_ = 0;
  std::vector<std::size_t> max_size_by_c_;
};

/// Archive snapshot as CSV: c,mu,var,bits (bits in BitSolution::to_hex order).
inline void write_population_csv(std::ostream& out, std::span<const Individual> members) {
  out << "c,mu,var,bits\n";
  for (const auto& ind : members)
    out << ind.obj.c << ',' << format_double(ind.obj.mu) << ',' << format_double(ind.obj.var) << ',' << ind.x.to_hex()
        << '\n';
}

}  // namespace ccsw
