#pragma once

// Seeded synthetic graphs for desk-scale experiments.

#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ccsw/errors.hpp"
#include "ccsw/graph.hpp"
#include "ccsw/random.hpp"

namespace ccsw {

/// Node 0 is the center, nodes 1..n-1 the leaves.
inline Graph star_graph(std::size_t n) {
  require(n >= 1, "star_graph: need at least one node");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 1; i < n; ++i) edges.emplace_back(0, static_cast<NodeId>(i));
  return Graph::from_edges(n, edges);
}

inline Graph path_graph(std::size_t n) {
  require(n >= 1, "path_graph: need at least one node");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 1; i < n; ++i) edges.emplace_back(static_cast<NodeId>(i - 1), static_cast<NodeId>(i));
  return Graph::from_edges(n, edges);
}

/// G(n, p): each pair (i < j), in lexicographic order, is an edge with probability p.
inline Graph erdos_renyi_graph(std::size_t n, double p, Rng& rng) {
  require(n >= 1, "erdos_renyi_graph: need at least one node");
  require(p >= 0.0 && p <= 1.0, "erdos_renyi_graph: p must lie in [0, 1]");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (uniform_unit(rng) < p) edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
  return Graph::from_edges(n, edges);
}

/// "star:N", "path:N" or "er:N:P"; the seed only matters for "er".
inline Graph make_synthetic_graph(std::string_view spec, std::uint64_t seed) {
  std::vector<std::string_view> parts;
  for (std::size_t start = 0;;) {
    const auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  const auto bad = [&] { return ConfigError("invalid synthetic graph '" + std::string(spec) + "' (star:N, path:N, er:N:P)"); };
  if (parts.size() < 2) throw bad();
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), n);
  if (ec != std::errc{} || ptr != parts[1].data() + parts[1].size() || n == 0) throw bad();
  if (parts[0] == "star" && parts.size() == 2) return star_graph(n);
  if (parts[0] == "path" && parts.size() == 2) return path_graph(n);
  if (parts[0] == "er" && parts.size() == 3) {
    double p = 0.0;
    auto [pp, pec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), p);
    if (pec != std::errc{} || pp != parts[2].data() + parts[2].size() || p < 0.0 || p > 1.0) throw bad();
    Rng rng = make_rng(seed, 0x6772617068);  // "graph"
    return erdos_renyi_graph(n, p, rng);
  }
  throw bad();
}

}  // namespace ccsw
