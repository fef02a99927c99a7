#pragma once

/// Experiment harness: repeated seeded runs of several algorithms on shared instances,
/// per-confidence-level extraction of the final surrogate weight, summaries, pairwise
/// Mann-Whitney p-values and population-size reporting.
///
/// Seeding: run r uses run_seed = base_seed + r. The weight instance is drawn from stream 0
/// of run_seed and every algorithm draws from stream 1 (the (1+1) EA from stream 100 + beta
/// index), so all algorithms of one config see identical instances per run index.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccsw/archive.hpp"
#include "ccsw/csv.hpp"
#include "ccsw/engine.hpp"
#include "ccsw/errors.hpp"
#include "ccsw/graph.hpp"
#include "ccsw/problems.hpp"
#include "ccsw/random.hpp"
#include "ccsw/stats.hpp"
#include "ccsw/synthetic.hpp"

namespace ccsw {

enum class Algorithm { Gsemo2d, Gsemo3d, SwGsemo3d, FastSwGsemo3d, OnePlusOneEa };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Gsemo2d: return "gsemo2d";
    case Algorithm::Gsemo3d: return "gsemo3d";
    case Algorithm::SwGsemo3d: return "sw_gsemo3d";
    case Algorithm::FastSwGsemo3d: return "fast_sw_gsemo3d";
    case Algorithm::OnePlusOneEa: return "one_plus_one_ea";
  }
  return "?";
}

inline Init parse_init(std::string_view s) {
  if (s == "zeros") return Init::Zeros;
  if (s == "random") return Init::Random;
  throw ConfigError("unknown init '" + std::string(s) + "' (zeros|random)");
}

struct AlgorithmSpec {
  Algorithm algorithm = Algorithm::FastSwGsemo3d;
  Init init = Init::Random;
  std::string label;
};

/// "name" or "name:zeros" / "name:random"; the suffix overrides the default initialization.
inline AlgorithmSpec parse_algorithm(std::string_view text, Init default_init) {
  AlgorithmSpec spec;
  spec.label = std::string(text);
  spec.init = default_init;
  std::string_view name = text;
  if (const auto colon = text.find(':'); colon != std::string_view::npos) {
    name = text.substr(0, colon);
    spec.init = parse_init(text.substr(colon + 1));
  }
  static constexpr Algorithm all[] = {Algorithm::Gsemo2d, Algorithm::Gsemo3d, Algorithm::SwGsemo3d,
                                      Algorithm::FastSwGsemo3d, Algorithm::OnePlusOneEa};
  for (auto a : all) {
    if (name == to_string(a)) {
      spec.algorithm = a;
      return spec;
    }
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

enum class WeightMode { Uniform, Degree };
enum class ProblemType { DominatingSet, UniformK };

struct ExperimentConfig {
  std::vector<AlgorithmSpec> algorithms;
  ProblemType problem = ProblemType::DominatingSet;
  std::string graph_path;       // edge-list file, or
  std::string synthetic_graph;  // "star:N" | "path:N" | "er:N:P"
  std::uint64_t graph_seed = 1;
  std::size_t items = 0;        // uniform-k: number of items
  std::int64_t target_k = 0;    // uniform-k: required cardinality
  WeightMode weights = WeightMode::Uniform;
  std::int64_t budget = 10'000'000;
  std::size_t runs = 30;
  std::uint64_t base_seed = 1;
  std::vector<double> betas = default_beta_grid();
  SlidingParams sliding = SlidingParams::fast_defaults();
  double penalty = kInfeasiblePenalty;
  std::size_t threads = 1;
  std::string dump_dir;   // instances and final populations per run, when set
  std::string trace_dir;  // per-run JSON-lines traces, when set
  std::int64_t trace_every = 1;

  void validate() const {
    if (algorithms.empty()) throw ConfigError("no algorithm selected");
    if (runs < 1) throw ConfigError("runs must be at least 1");
    if (budget < 1) throw ConfigError("budget must be at least 1");
    if (threads < 1) throw ConfigError("threads must be at least 1");
    if (!(penalty > 0.0)) throw ConfigError("penalty must be positive");
    if (trace_every < 1) throw ConfigError("trace stride must be at least 1");
    if (betas.empty()) throw ConfigError("beta list is empty");
    for (double b : betas)
      if (!(b > 0.0 && b <= 0.5)) throw ConfigError("every beta must lie in (0, 0.5]");
    for (std::size_t i = 0; i < betas.size(); ++i)
      if (std::find(betas.begin() + static_cast<std::ptrdiff_t>(i) + 1, betas.end(), betas[i]) != betas.end())
        throw ConfigError("duplicate beta in list");
    sliding.validate();
    if (problem == ProblemType::DominatingSet) {
      if (graph_path.empty() == synthetic_graph.empty())
        throw ConfigError("dominating set needs exactly one of a graph file or a synthetic graph");
    } else {
      if (!graph_path.empty() || !synthetic_graph.empty()) throw ConfigError("uniform-k takes no graph");
      if (items < 1) throw ConfigError("uniform-k needs at least one item");
      if (target_k < 0 || target_k > static_cast<std::int64_t>(items)) throw ConfigError("k must lie in [0, n]");
      if (weights == WeightMode::Degree) throw ConfigError("degree-based weights need a graph");
    }
  }
};

/// Final value of one run at one confidence level.
struct FinalValue {
  double value = kInfeasiblePenalty;
  bool feasible = false;
};

/// Minimum surrogate weight over members that reach the instance's target constraint value
/// (c = B for dominating set, c >= k for the uniform model); (penalty, false) if there are none.
inline FinalValue extract_final(const ProblemInstance& inst, const ConfidenceLevel& level,
                                std::span<const Individual> population, double penalty) {
  FinalValue out{penalty, false};
  for (const auto& ind : population) {
    if (ind.obj.c < inst.target()) continue;
    const double w = surrogate_weight(ind.obj, level);
    if (!out.feasible || w < out.value) out = {w, true};
  }
  return out;
}

struct RunRecord {
  double beta = 0.0;
  std::string algo;
  std::size_t run = 0;
  double final_w = 0.0;
  bool feasible = false;
  std::size_t max_pop_overall = 0;
  std::size_t max_pop_window = 0;
  std::int64_t evals = 0;
};

struct PairTest {
  std::string a;
  std::string b;
  double p = 1.0;
  bool exact = false;
};

struct AlgoSummary {
  std::string algo;
  SampleSummary summary;
};

struct ResultRow {
  double beta = 0.0;
  std::vector<AlgoSummary> summaries;  // config order
  std::vector<PairTest> tests;         // every pair (i < j) in config order
};

struct PopulationRow {
  std::string algo;
  double mean_overall = 0.0, std_overall = 0.0;
  double mean_window = 0.0, std_window = 0.0;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;  // sorted by (beta index, algorithm index, run)
  std::vector<ResultRow> rows;
  std::vector<PopulationRow> population;
};

inline std::uint64_t run_seed(const ExperimentConfig& cfg, std::size_t run) { return cfg.base_seed + run; }

inline constexpr std::uint64_t kInstanceStream = 0;
inline constexpr std::uint64_t kAlgorithmStream = 1;
inline constexpr std::uint64_t kSingleObjectiveStream = 100;

/// The graph shared by every run (nullptr for uniform-k).
inline std::shared_ptr<const Graph> load_config_graph(const ExperimentConfig& cfg) {
  if (cfg.problem != ProblemType::DominatingSet) return nullptr;
  if (!cfg.graph_path.empty()) return std::make_shared<const Graph>(load_edge_list_file(cfg.graph_path));
  return std::make_shared<const Graph>(make_synthetic_graph(cfg.synthetic_graph, cfg.graph_seed));
}

/// Weight instance for run index `run`; identical for every algorithm of the config.
inline ProblemInstance make_run_instance(const ExperimentConfig& cfg, const std::shared_ptr<const Graph>& graph,
                                         std::size_t run) {
  Rng rng = make_rng(run_seed(cfg, run), kInstanceStream);
  if (cfg.problem == ProblemType::UniformK)
    return ProblemInstance::uniform_constraint(gen_uniform_weights(cfg.items, rng), cfg.target_k);
  auto weights = cfg.weights == WeightMode::Degree ? gen_degree_weights(*graph, rng) : gen_uniform_weights(graph->size(), rng);
  return ProblemInstance::dominating_set(graph, std::move(weights));
}

namespace detail {

inline std::string file_label(std::string_view label) {
  std::string out(label);
  std::replace(out.begin(), out.end(), ':', '_');
  return out;
}

inline void write_trace_line(std::ostream& out, const TraceRecord& r) {
  nlohmann::json j = {{"t", r.t},
                      {"mode", to_string(r.mode)},
                      {"lo", r.window.lo},
                      {"hi", r.window.hi},
                      {"pool", r.pool_size},
                      {"pruned", r.pruned},
                      {"archive", r.archive_size},
                      {"c_max", r.c_max},
                      {"mu_min", r.mu_min},
                      {"t0", r.t0},
                      {"accepted", r.outcome == InsertOutcome::Accepted}};
  out << j.dump() << '\n';
}

struct Task {
  std::size_t algo_index = 0;
  std::size_t run = 0;
  std::size_t beta_index = 0;  // single-objective runs only
};

inline double max_k_alpha(const std::vector<double>& betas) {
  double k = 0.0;
  for (double b : betas) k = std::max(k, ConfidenceLevel::from_beta(b).k_alpha);
  return k;
}

// Executes one task and returns its records (one per beta for population-based algorithms).
inline std::vector<RunRecord> execute_task(const ExperimentConfig& cfg, const std::shared_ptr<const Graph>& graph,
                                           const Task& task) {
  const AlgorithmSpec& spec = cfg.algorithms[task.algo_index];
  const ProblemInstance inst = make_run_instance(cfg, graph, task.run);
  const double k_max = max_k_alpha(cfg.betas);
  std::vector<RunRecord> out;

  if (spec.algorithm == Algorithm::OnePlusOneEa) {
    const auto level = ConfidenceLevel::from_beta(cfg.betas[task.beta_index]);
    Rng rng = make_rng(run_seed(cfg, task.run), kSingleObjectiveStream + task.beta_index);
    const auto r = run_one_plus_one_ea(inst, level, cfg.budget, rng, surrogate_penalty(inst.weights(), k_max), spec.init);
    const std::vector<Individual> single{r.best};
    const FinalValue fv = extract_final(inst, level, single, cfg.penalty);
    out.push_back({level.beta, spec.label, task.run, fv.value, fv.feasible, 1, 0, r.evaluations});
    return out;
  }

  std::ofstream trace_file;
  RunOptions options;
  if (!cfg.trace_dir.empty()) {
    const auto path = std::filesystem::path(cfg.trace_dir) /
                      (file_label(spec.label) + "_run" + std::to_string(task.run) + ".jsonl");
    trace_file.open(path);
    if (!trace_file) throw std::runtime_error("cannot write trace file '" + path.string() + "'");
    options.trace = [&](const TraceRecord& rec) {
      if (rec.t % cfg.trace_every == 0) write_trace_line(trace_file, rec);
    };
  }

  Rng rng = make_rng(run_seed(cfg, task.run), kAlgorithmStream);
  RunResult result;
  switch (spec.algorithm) {
    case Algorithm::Gsemo2d:
      result = run_gsemo2d(inst, cfg.budget, spec.init, rng, gsemo2d_penalty(inst.weights(), k_max), options);
      break;
    case Algorithm::Gsemo3d: result = run_gsemo3d(inst, cfg.budget, spec.init, rng, options); break;
    case Algorithm::SwGsemo3d: result = run_sw_gsemo3d(inst, cfg.budget, spec.init, rng, options); break;
    case Algorithm::FastSwGsemo3d:
      result = run_fast_sw_gsemo3d(inst, cfg.budget, cfg.sliding, spec.init, rng, options);
      break;
    case Algorithm::OnePlusOneEa: break;
  }
  if (result.evaluations > cfg.budget) throw std::logic_error("run exceeded its evaluation budget");

  if (!cfg.dump_dir.empty()) {
    const auto stem = std::filesystem::path(cfg.dump_dir) / (file_label(spec.label) + "_run" + std::to_string(task.run));
    std::ofstream pop(std::filesystem::path(stem).concat("_population.csv"));
    if (!pop) throw std::runtime_error("cannot write population dump for '" + stem.string() + "'");
    write_population_csv(pop, result.population);
  }

  for (double beta : cfg.betas) {
    const auto level = ConfidenceLevel::from_beta(beta);
    const FinalValue fv = extract_final(inst, level, result.population, cfg.penalty);
    out.push_back({beta, spec.label, task.run, fv.value, fv.feasible, result.max_population, result.max_window_pool,
                   result.evaluations});
  }
  return out;
}

inline void dump_instances(const ExperimentConfig& cfg, const std::shared_ptr<const Graph>& graph) {
  std::filesystem::create_directories(cfg.dump_dir);
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    InstanceHeader h;
    h.weight_mode = cfg.weights == WeightMode::Degree ? "degree" : "uniform";
    h.seed = run_seed(cfg, r);
    h.graph_file = cfg.graph_path;
    save_instance(std::filesystem::path(cfg.dump_dir) / ("instance_run" + std::to_string(r)), make_run_instance(cfg, graph, r), h);
  }
}

}  // namespace detail

/// Runs every (algorithm, run) pair, in parallel over `cfg.threads` workers, and aggregates.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto graph = load_config_graph(cfg);
  if (!cfg.dump_dir.empty()) detail::dump_instances(cfg, graph);
  if (!cfg.trace_dir.empty()) std::filesystem::create_directories(cfg.trace_dir);

  std::vector<detail::Task> tasks;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    for (std::size_t r = 0; r < cfg.runs; ++r) {
      if (cfg.algorithms[a].algorithm == Algorithm::OnePlusOneEa) {
        for (std::size_t b = 0; b < cfg.betas.size(); ++b) tasks.push_back({a, r, b});
      } else {
        tasks.push_back({a, r, 0});
      }
    }
  }

  std::vector<std::vector<RunRecord>> outputs(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        outputs[i] = detail::execute_task(cfg, graph, tasks[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks.size());
      }
    }
  };
  const std::size_t workers = std::min(cfg.threads, tasks.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  // Regroup as [beta][algorithm][run].
  const std::size_t nb = cfg.betas.size(), na = cfg.algorithms.size();
  std::vector<std::vector<std::vector<RunRecord>>> grid(nb, std::vector<std::vector<RunRecord>>(na, std::vector<RunRecord>(cfg.runs)));
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (const auto& rec : outputs[i]) {
      const auto b = static_cast<std::size_t>(std::find(cfg.betas.begin(), cfg.betas.end(), rec.beta) - cfg.betas.begin());
      grid[b][tasks[i].algo_index][rec.run] = rec;
    }
  }

  ExperimentResult result;
  for (std::size_t b = 0; b < nb; ++b) {
    ResultRow row;
    row.beta = cfg.betas[b];
    std::vector<std::vector<double>> samples(na);
    for (std::size_t a = 0; a < na; ++a) {
      std::vector<double> values;
      std::vector<bool> feasible;
      for (const auto& rec : grid[b][a]) {
        result.runs.push_back(rec);
        values.push_back(rec.final_w);
        feasible.push_back(rec.feasible);
      }
      auto summary = summarize(values, cfg.penalty, feasible);
      samples[a] = summary.values;
      row.summaries.push_back({cfg.algorithms[a].label, std::move(summary)});
    }
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = i + 1; j < na; ++j) {
        const auto mw = mann_whitney(samples[i], samples[j]);
        row.tests.push_back({cfg.algorithms[i].label, cfg.algorithms[j].label, mw.p, mw.exact});
      }
    }
    result.rows.push_back(std::move(row));
  }

  for (std::size_t a = 0; a < na; ++a) {
    std::vector<double> overall, window;
    for (const auto& rec : grid[0][a]) {
      overall.push_back(static_cast<double>(rec.max_pop_overall));
      window.push_back(static_cast<double>(rec.max_pop_window));
    }
    const std::vector<bool> counted(overall.size(), true);
    const auto so = summarize(overall, 0.0, counted);
    const auto sw = summarize(window, 0.0, counted);
    result.population.push_back({cfg.algorithms[a].label, so.mean, so.std, sw.mean, sw.std});
  }
  return result;
}

// ---------------------------------------------------------------------------
// CSV output

inline void write_runs_csv(std::ostream& out, const ExperimentResult& r) {
  out << "beta,algo,run,final_w,feasible,max_pop_overall,max_pop_window,evals\n";
  for (const auto& rec : r.runs)
    out << format_double(rec.beta) << ',' << rec.algo << ',' << rec.run << ',' << format_double(rec.final_w) << ','
        << (rec.feasible ? 1 : 0) << ',' << rec.max_pop_overall << ',' << rec.max_pop_window << ',' << rec.evals << '\n';
}

inline void write_summary_csv(std::ostream& out, const ExperimentResult& r) {
  out << "beta,algo,mean,std,feasible,runs\n";
  for (const auto& row : r.rows)
    for (const auto& s : row.summaries)
      out << format_double(row.beta) << ',' << s.algo << ',' << format_double(s.summary.mean) << ','
          << format_double(s.summary.std) << ',' << s.summary.feasible << ',' << s.summary.count << '\n';
}

inline void write_pvalues_csv(std::ostream& out, const ExperimentResult& r) {
  out << "beta,algo_a,algo_b,p_value,exact\n";
  for (const auto& row : r.rows)
    for (const auto& t : row.tests)
      out << format_double(row.beta) << ',' << t.a << ',' << t.b << ',' << format_double(t.p) << ',' << (t.exact ? 1 : 0)
          << '\n';
}

/// One row per beta: mean and std per algorithm, then every pairwise p-value.
inline void write_table_csv(std::ostream& out, const ExperimentResult& r) {
  if (r.rows.empty()) return;
  out << "beta";
  for (const auto& s : r.rows.front().summaries) out << ',' << s.algo << "_mean," << s.algo << "_std";
  for (const auto& t : r.rows.front().tests) out << ",p_" << t.a << "_vs_" << t.b;
  out << '\n';
  for (const auto& row : r.rows) {
    out << format_double(row.beta);
    for (const auto& s : row.summaries) out << ',' << format_double(s.summary.mean) << ',' << format_double(s.summary.std);
    for (const auto& t : row.tests) out << ',' << format_double(t.p);
    out << '\n';
  }
}

inline void write_popsize_csv(std::ostream& out, const ExperimentResult& r) {
  out << "algo,max_pop_overall_mean,max_pop_overall_std,max_pop_window_mean,max_pop_window_std\n";
  for (const auto& p : r.population)
    out << p.algo << ',' << format_double(p.mean_overall) << ',' << format_double(p.std_overall) << ','
        << format_double(p.mean_window) << ',' << format_double(p.std_window) << '\n';
}

/// Writes runs.csv, summary.csv, pvalues.csv, table.csv and popsize.csv into `dir`.
inline void write_experiment(const std::filesystem::path& dir, const ExperimentResult& r) {
  std::filesystem::create_directories(dir);
  const auto emit = [&](const char* name, void (*writer)(std::ostream&, const ExperimentResult&)) {
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
    writer(out, r);
  };
  emit("runs.csv", write_runs_csv);
  emit("summary.csv", write_summary_csv);
  emit("pvalues.csv", write_pvalues_csv);
  emit("table.csv", write_table_csv);
  emit("popsize.csv", write_popsize_csv);
}

}  // namespace ccsw
