#pragma once

/// Problem models for chance-constrained optimization with normally distributed weights.
///
/// Every element i carries an expected weight mu_i and a variance var_i. A selection x has
/// mu(x) = sum mu_i x_i and v(x) = sum var_i x_i, and the chance constraint
/// Pr(w(x) <= W) >= alpha is handled through the surrogate mu(x) + K_alpha sqrt(v(x)).
///
/// Two models are built in:
///  - DominatingSet: c(x) is the number of dominated nodes, feasible iff c(x) = n (B = n).
///  - UniformConstraint: c(x) = |x|_1 with a target cardinality k <= B = n.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccsw/bit_solution.hpp"
#include "ccsw/csv.hpp"
#include "ccsw/errors.hpp"
#include "ccsw/graph.hpp"
#include "ccsw/normal.hpp"
#include "ccsw/objective.hpp"
#include "ccsw/random.hpp"

namespace ccsw {

/// Per-element expected weights and variances.
struct StochasticWeights {
  std::vector<double> mu;
  std::vector<double> var;

  StochasticWeights() = default;
  StochasticWeights(std::vector<double> mu_, std::vector<double> var_) : mu(std::move(mu_)), var(std::move(var_)) {
    require(mu.size() == var.size(), "StochasticWeights: mu and var differ in length");
    for (std::size_t i = 0; i < mu.size(); ++i)
      require(mu[i] >= 0.0 && var[i] >= 0.0 && std::isfinite(mu[i]) && std::isfinite(var[i]),
              "StochasticWeights: weights must be finite and non-negative");
  }

  [[nodiscard]] std::size_t size() const noexcept { return mu.size(); }

  // Both sums run over set bits in index order so equal subsets give bit-identical results.
  [[nodiscard]] double mean_of(const BitSolution& x) const {
    double total = 0.0;
    x.for_each_set_bit([&](std::size_t i) { total += mu[i]; });
    return total;
  }

  [[nodiscard]] double variance_of(const BitSolution& x) const {
    double total = 0.0;
    x.for_each_set_bit([&](std::size_t i) { total += var[i]; });
    return total;
  }

  [[nodiscard]] double total_mean() const { return mean_of(BitSolution::ones(size())); }
  [[nodiscard]] double total_variance() const { return variance_of(BitSolution::ones(size())); }
};

/// Confidence level alpha = 1 - beta with its cached normal quantile K_alpha.
struct ConfidenceLevel {
  double beta = 0.5;
  double alpha = 0.5;
  double k_alpha = 0.0;

  /// beta must lie in (0, 1/2]; K_alpha = -Phi^{-1}(beta).
  static ConfidenceLevel from_beta(double beta) {
    if (!(beta > 0.0 && beta <= 0.5)) throw std::domain_error("ConfidenceLevel: beta must lie in (0, 1/2]");
    const double k = (beta == 0.5) ? 0.0 : -normal_quantile(beta);
    return {beta, 1.0 - beta, k};
  }
};

/// The tail probabilities reported in the dominating-set experiments.
inline std::vector<double> default_beta_grid() { return {0.2, 0.1, 0.01, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12, 1e-14}; }

/// mu + K_alpha * sqrt(v)
inline double surrogate_weight(double mu, double var, const ConfidenceLevel& level) {
  return mu + level.k_alpha * std::sqrt(var);
}

inline double surrogate_weight(const Objective3& obj, const ConfidenceLevel& level) {
  return surrogate_weight(obj.mu, obj.var, level);
}

inline double surrogate_weight(const StochasticWeights& w, const BitSolution& x, const ConfidenceLevel& level) {
  require(x.size() == w.size(), "surrogate_weight: solution length differs from element count");
  return surrogate_weight(w.mean_of(x), w.variance_of(x), level);
}

enum class ProblemKind { DominatingSet, UniformConstraint };

inline const char* to_string(ProblemKind kind) {
  return kind == ProblemKind::DominatingSet ? "dominating_set" : "uniform_constraint";
}

class ProblemInstance {
 public:
  static ProblemInstance dominating_set(std::shared_ptr<const Graph> graph, StochasticWeights weights) {
    require(graph != nullptr, "dominating_set: graph is null");
    require(weights.size() == graph->size(), "dominating_set: weights must cover every node");
    ProblemInstance inst;
    inst.kind_ = ProblemKind::DominatingSet;
    inst.bound_ = static_cast<std::int64_t>(graph->size());
    inst.target_ = inst.bound_;
    inst.graph_ = std::move(graph);
    inst.weights_ = std::move(weights);
    return inst;
  }

  /// c(x) = |x|_1, B = n; `target_k` is the cardinality a final solution must reach.
  static ProblemInstance uniform_constraint(StochasticWeights weights, std::int64_t target_k) {
    const auto n = static_cast<std::int64_t>(weights.size());
    require(target_k >= 0 && target_k <= n, "uniform_constraint: target k must lie in [0, n]");
    ProblemInstance inst;
    inst.kind_ = ProblemKind::UniformConstraint;
    inst.bound_ = n;
    inst.target_ = target_k;
    inst.weights_ = std::move(weights);
    return inst;
  }

  [[nodiscard]] ProblemKind kind() const noexcept { return kind_; }
  [[nodiscard]] const StochasticWeights& weights() const noexcept { return weights_; }
  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  /// B, the largest reachable constraint value.
  [[nodiscard]] std::int64_t bound() const noexcept { return bound_; }
  /// Constraint value a final solution needs: B for dominating set, k for the uniform model.
  [[nodiscard]] std::int64_t target() const noexcept { return target_; }
  [[nodiscard]] const Graph* graph() const noexcept { return graph_.get(); }
  [[nodiscard]] const std::shared_ptr<const Graph>& shared_graph() const noexcept { return graph_; }

 private:
  ProblemInstance() = default;

  ProblemKind kind_ = ProblemKind::UniformConstraint;
  std::shared_ptr<const Graph> graph_;
  StochasticWeights weights_;
  std::int64_t bound_ = 0;
  std::int64_t target_ = 0;
};

/// Constraint value c(x).
inline std::int64_t constraint_value(const ProblemInstance& inst, const BitSolution& x) {
  if (inst.kind() == ProblemKind::DominatingSet) return static_cast<std::int64_t>(count_dominated(*inst.graph(), x));
  return static_cast<std::int64_t>(x.count());
}

/// f3D(x) = (mu(x), v(x), c(x)).
inline Objective3 evaluate(const ProblemInstance& inst, const BitSolution& x) {
  require(x.size() == inst.size(), "evaluate: solution length differs from instance size");
  return {inst.weights().mean_of(x), inst.weights().variance_of(x), constraint_value(inst, x)};
}

/// Evaluates `child`, obtained from `parent` by flipping `flipped`, reusing the parent's constraint value.
/// The result is identical to evaluate(inst, child).
inline Objective3 evaluate_offspring(const ProblemInstance& inst, const Individual& parent, const BitSolution& child,
                                     std::span<const std::size_t> flipped) {
  require(child.size() == inst.size(), "evaluate_offspring: solution length differs from instance size");
  std::int64_t c = parent.obj.c;
  if (inst.kind() == ProblemKind::DominatingSet) {
    c += dominated_delta(*inst.graph(), parent.x, child, flipped);
  } else {
    for (auto i : flipped) c += child[i] ? 1 : -1;
  }
  return {inst.weights().mean_of(child), inst.weights().variance_of(child), c};
}

/// mu_i uniform in {n..2n}, var_i uniform in {n^2..2n^2}, drawn in the order mu[0], var[0], mu[1], ...
inline StochasticWeights gen_uniform_weights(std::size_t n, Rng& rng) {
  require(n >= 1, "gen_uniform_weights: n must be positive");
  const auto nn = static_cast<std::int64_t>(n);
  std::vector<double> mu(n), var(n);
  for (std::size_t i = 0; i < n; ++i) {
    mu[i] = static_cast<double>(uniform_int(rng, nn, 2 * nn));
    var[i] = static_cast<double>(uniform_int(rng, nn * nn, 2 * nn * nn));
  }
  return {std::move(mu), std::move(var)};
}

/// mu(u) = (n + deg(u))^5 / n^4 (kept fractional), var(u) uniform in {n^2..2n^2}.
inline StochasticWeights gen_degree_weights(const Graph& g, Rng& rng) {
  require(g.size() >= 1, "gen_degree_weights: graph is empty");
  const std::size_t n = g.size();
  const auto nn = static_cast<std::int64_t>(n);
  const double n4 = std::pow(static_cast<double>(n), 4);
  std::vector<double> mu(n), var(n);
  for (std::size_t i = 0; i < n; ++i) {
    mu[i] = std::pow(static_cast<double>(n + g.degree(i)), 5) / n4;
    var[i] = static_cast<double>(uniform_int(rng, nn * nn, 2 * nn * nn));
  }
  return {std::move(mu), std::move(var)};
}

// ---------------------------------------------------------------------------
// Instance files: <stem>.json header plus <stem>.csv with columns node,mu,var.

struct InstanceHeader {
  ProblemKind kind = ProblemKind::DominatingSet;
  std::string weight_mode;  // "uniform" | "degree" | "custom"
  std::uint64_t seed = 0;
  std::string graph_file;   // empty for synthetic graphs or the uniform model
  std::int64_t bound = 0;
  std::int64_t target = 0;
};

inline void write_weights_csv(std::ostream& out, const StochasticWeights& w) {
  out << "node,mu,var\n";
  for (std::size_t i = 0; i < w.size(); ++i) out << i << ',' << format_double(w.mu[i]) << ',' << format_double(w.var[i]) << '\n';
}

inline StochasticWeights read_weights_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || trim_cr(line) != "node,mu,var") throw ParseError("expected header 'node,mu,var'", 1);
  std::vector<double> mu, var;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_cr(line).empty()) continue;
    const auto fields = split_csv_line(trim_cr(line));
    if (fields.size() != 3) throw ParseError("expected 3 columns", line_no);
    const auto node = parse_int(fields[0], line_no);
    if (node != static_cast<std::int64_t>(mu.size())) throw ParseError("node indices must be consecutive from 0", line_no);
    mu.push_back(parse_double(fields[1], line_no));
    var.push_back(parse_double(fields[2], line_no));
  }
  return {std::move(mu), std::move(var)};
}

inline nlohmann::json header_to_json(const InstanceHeader& h) {
  return {{"kind", to_string(h.kind)}, {"weights", h.weight_mode}, {"seed", h.seed},
          {"graph_file", h.graph_file}, {"B", h.bound},     {"k", h.target}};
}

inline InstanceHeader header_from_json(const nlohmann::json& j) {
  InstanceHeader h;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "dominating_set") {
    h.kind = ProblemKind::DominatingSet;
  } else if (kind == "uniform_constraint") {
    h.kind = ProblemKind::UniformConstraint;
  } else {
    throw ParseError("unknown instance kind '" + kind + "'", 0);
  }
  h.weight_mode = j.value("weights", std::string{"custom"});
  h.seed = j.value("seed", std::uint64_t{0});
  h.graph_file = j.value("graph_file", std::string{});
  h.bound = j.at("B").get<std::int64_t>();
  h.target = j.value("k", h.bound);
  return h;
}

/// Writes <stem>.json and <stem>.csv.
inline void save_instance(const std::filesystem::path& stem, const ProblemInstance& inst, InstanceHeader header) {
  header.kind = inst.kind();
  header.bound = inst.bound();
  header.target = inst.target();
  std::ofstream json_out(std::filesystem::path(stem).concat(".json"));
  std::ofstream csv_out(std::filesystem::path(stem).concat(".csv"));
  if (!json_out || !csv_out) throw std::runtime_error("cannot write instance files for '" + stem.string() + "'");
  json_out << header_to_json(header).dump(2) << '\n';
  write_weights_csv(csv_out, inst.weights());
}

struct LoadedInstance {
  InstanceHeader header;
  StochasticWeights weights;
};

/// Reads <stem>.json and <stem>.csv. Rebuilding a dominating-set instance needs the graph, see make_instance().
inline LoadedInstance load_instance_files(const std::filesystem::path& stem) {
  std::ifstream json_in(std::filesystem::path(stem).concat(".json"));
  std::ifstream csv_in(std::filesystem::path(stem).concat(".csv"));
  if (!json_in || !csv_in) throw std::runtime_error("cannot read instance files for '" + stem.string() + "'");
  LoadedInstance out;
  try {
    out.header = header_from_json(nlohmann::json::parse(json_in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance header: ") + e.what(), 0);
  }
  out.weights = read_weights_csv(csv_in);
  if (out.header.bound != static_cast<std::int64_t>(out.weights.size()))
    throw ParseError("instance header B does not match the number of weight rows", 0);
  return out;
}

/// Rebuilds the instance from loaded files; `graph` is required for dominating set and ignored otherwise.
inline ProblemInstance make_instance(const LoadedInstance& loaded, std::shared_ptr<const Graph> graph = nullptr) {
  if (loaded.header.kind == ProblemKind::DominatingSet) {
    if (!graph) {
      if (loaded.header.graph_file.empty()) throw ConfigError("dominating-set instance needs a graph");
      graph = std::make_shared<const Graph>(load_edge_list_file(loaded.header.graph_file));
    }
    return ProblemInstance::dominating_set(std::move(graph), loaded.weights);
  }
  return ProblemInstance::uniform_constraint(loaded.weights, loaded.header.target);
}

}  // namespace ccsw
