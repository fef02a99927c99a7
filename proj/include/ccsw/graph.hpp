#pragma once

/// Undirected graphs loaded from edge lists, plus domination counting for node selections.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ccsw/bit_solution.hpp"
#include "ccsw/errors.hpp"

namespace ccsw {

using NodeId = std::uint32_t;

/// Immutable undirected simple graph on nodes 0..n-1 with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;

  /// Symmetrizes and deduplicates `edges`; self-loops are dropped. Every endpoint must be < n.
  static Graph from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) {
    Graph g;
    g.adjacency_.assign(n, {});
    for (const auto& [u, v] : edges) {
      require(u < n && v < n, "Graph::from_edges: endpoint out of range");
      if (u == v) continue;
      g.adjacency_[u].push_back(v);
      g.adjacency_[v].push_back(u);
    }
    for (auto& list : g.adjacency_) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      g.edge_count_ += list.size();
    }
    g.edge_count_ /= 2;
    return g;
  }

  [[nodiscard]] std::size_t size() const noexcept { return adjacency_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edge_count_; }
  [[nodiscard]] std::size_t degree(std::size_t v) const noexcept { return adjacency_[v].size(); }
  [[nodiscard]] std::span<const NodeId> neighbors(std::size_t v) const noexcept { return adjacency_[v]; }

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t edge_count_ = 0;
};

namespace detail {

inline std::string_view trim_left(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  return s;
}

inline std::string_view next_token(std::string_view& s) {
  s = trim_left(s);
  std::size_t end = 0;
  while (end < s.size() && s[end] != ' ' && s[end] != '\t' && s[end] != '\r') ++end;
  auto token = s.substr(0, end);
  s.remove_prefix(end);
  return token;
}

}  // namespace detail

/// Parses an edge list: one "u v" pair per line, '%' or '#' lines are comments.
///
/// IDs may be 0- or 1-based; when the smallest ID is 1 every ID is shifted down by one.
/// A third numeric column (edge weight) is accepted and ignored. When the stream opens
/// with a MatrixMarket banner, the first data line is the size line and is skipped.
/// Nodes up to the maximum ID are kept even if isolated.
inline Graph load_edge_list(std::istream& in) {
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::string line;
  std::size_t line_no = 0;
  bool matrix_market = false;
  bool size_line_pending = false;
  std::int64_t min_id = std::numeric_limits<std::int64_t>::max();
  std::int64_t max_id = -1;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = detail::trim_left(line);
    if (rest.empty()) continue;
    if (rest.front() == '%' || rest.front() == '#') {
      if (line_no == 1 && rest.starts_with("%%MatrixMarket")) {
        matrix_market = true;
        size_line_pending = true;
      }
      continue;
    }
    if (matrix_market && size_line_pending) {
      size_line_pending = false;
      continue;
    }

    std::int64_t ids[2] = {0, 0};
    for (auto& id : ids) {
      const auto token = detail::next_token(rest);
      if (token.empty()) throw ParseError("expected two node IDs", line_no);
      const auto* first = token.data();
      const auto* last = token.data() + token.size();
      auto [ptr, ec] = std::from_chars(first, last, id);
      if (ec != std::errc{} || ptr != last) throw ParseError("malformed node ID '" + std::string(token) + "'", line_no);
      if (id < 0) throw ParseError("negative node ID", line_no);
      if (id > std::numeric_limits<NodeId>::max() - 1) throw ParseError("node ID too large", line_no);
    }
    const auto weight = detail::next_token(rest);
    if (!weight.empty()) {
      double ignored = 0.0;
      auto [ptr, ec] = std::from_chars(weight.data(), weight.data() + weight.size(), ignored);
      if (ec != std::errc{} || ptr != weight.data() + weight.size())
        throw ParseError("malformed edge weight '" + std::string(weight) + "'", line_no);
    }
    if (!detail::next_token(rest).empty()) throw ParseError("too many columns", line_no);

    min_id = std::min({min_id, ids[0], ids[1]});
    max_id = std::max({max_id, ids[0], ids[1]});
    raw.emplace_back(ids[0], ids[1]);
  }

  if (raw.empty()) throw ParseError("edge list contains no edges; a graph needs at least one node", 0);

  const std::int64_t shift = (min_id == 1) ? 1 : 0;
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(raw.size());
  for (const auto& [u, v] : raw) edges.emplace_back(static_cast<NodeId>(u - shift), static_cast<NodeId>(v - shift));
  return Graph::from_edges(static_cast<std::size_t>(max_id - shift + 1), edges);
}

inline Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  return load_edge_list(in);
}

/// True iff v is selected or adjacent to a selected node.
inline bool is_dominated(const Graph& g, const BitSolution& x, std::size_t v) {
  if (x[v]) return true;
  for (auto u : g.neighbors(v))
    if (x[u]) return true;
  return false;
}

/// |{v : x_v = 1 or some neighbor of v has x = 1}|
inline std::size_t count_dominated(const Graph& g, const BitSolution& x) {
  require(x.size() == g.size(), "count_dominated: solution length differs from node count");
  std::vector<bool> covered(g.size(), false);
  std::size_t total = 0;
  x.for_each_set_bit([&](std::size_t v) {
    if (!covered[v]) {
      covered[v] = true;
      ++total;
    }
    for (auto u : g.neighbors(v)) {
      if (!covered[u]) {
        covered[u] = true;
        ++total;
      }
    }
  });
  return total;
}

/// Change in domination count when `before` turns into `after` by flipping exactly `flipped`.
///
/// Only the closed neighborhoods of flipped nodes can change status, so the cost is
/// proportional to the sum of their squared degrees rather than n + |E|.
inline std::int64_t dominated_delta(const Graph& g, const BitSolution& before, const BitSolution& after,
                                    std::span<const std::size_t> flipped) {
  std::vector<std::size_t> affected;
  for (auto f : flipped) {
    affected.push_back(f);
    for (auto u : g.neighbors(f)) affected.push_back(u);
  }
  std::sort(affected.begin(), affected.end());
  affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
  std::int64_t delta = 0;
  for (auto v : affected)
    delta += static_cast<std::int64_t>(is_dominated(g, after, v)) - static_cast<std::int64_t>(is_dominated(g, before, v));
  return delta;
}

/// Per-node dominator counts for a selection, updated incrementally under bit flips.
struct DominationState {
  std::vector<std::uint32_t> cover_count;
  std::size_t dominated_total = 0;

  static DominationState empty(const Graph& g) { return {std::vector<std::uint32_t>(g.size(), 0), 0}; }

  static DominationState from_scratch(const Graph& g, const BitSolution& x) {
    require(x.size() == g.size(), "DominationState: solution length differs from node count");
    DominationState s = empty(g);
    x.for_each_set_bit([&](std::size_t v) { s.add(g, v); });
    return s;
  }

  /// `flipped` lists exactly the positions that differ between the tracked selection and new_x.
  void apply_flips(const Graph& g, std::span<const std::size_t> flipped, const BitSolution& new_x) {
    for (auto v : flipped) {
      require(v < g.size(), "DominationState::apply_flips: index out of range");
      if (new_x[v]) {
        add(g, v);
      } else {
        remove(g, v);
      }
    }
  }

  friend bool operator==(const DominationState&, const DominationState&) = default;

 private:
  void bump(std::size_t v) {
    if (cover_count[v]++ == 0) ++dominated_total;
  }
  void drop(std::size_t v) {
    if (--cover_count[v] == 0) --dominated_total;
  }
  void add(const Graph& g, std::size_t v) {
    bump(v);
    for (auto u : g.neighbors(v)) bump(u);
  }
  void remove(const Graph& g, std::size_t v) {
    drop(v);
    for (auto u : g.neighbors(v)) drop(u);
  }
};

/// Functional form of DominationState::apply_flips.
inline DominationState flip_update(const Graph& g, DominationState state, std::span<const std::size_t> flipped,
                                   const BitSolution& new_x) {
  state.apply_flips(g, flipped, new_x);
  return state;
}

}  // namespace ccsw
