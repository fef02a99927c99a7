// Runs repeated seeded experiments and writes CSV summaries.

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "ccsw/bench.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Chance-constrained dominating set benchmark"};
  ccsw::ExperimentConfig cfg;
  std::vector<std::string> algos{"gsemo3d", "fast_sw_gsemo3d:zeros"};
  std::string problem = "domset", weights = "uniform", init = "random", out_dir = "results";

  app.add_option("--algo", algos, "Algorithms, comma separated; append :zeros or :random to set the start")
      ->delimiter(',');
  app.add_option("--graph", cfg.graph_path, "Edge-list file (whitespace separated, % or # comments)");
  app.add_option("--synthetic", cfg.synthetic_graph, "Synthetic graph: star:N, path:N or er:N:P");
  app.add_option("--graph-seed", cfg.graph_seed, "Seed for synthetic random graphs");
  app.add_option("--problem", problem, "domset or uniform-k")->check(CLI::IsMember({"domset", "uniform-k"}));
  app.add_option("--n", cfg.items, "Number of items (uniform-k)");
  app.add_option("--k", cfg.target_k, "Required cardinality (uniform-k)");
  app.add_option("--weights", weights, "uniform or degree")->check(CLI::IsMember({"uniform", "degree"}));
  app.add_option("--init", init, "Default start: zeros or random")->check(CLI::IsMember({"zeros", "random"}));
  app.add_option("--budget", cfg.budget, "Fitness evaluations per run");
  app.add_option("--runs", cfg.runs, "Independent runs per algorithm");
  app.add_option("--seed", cfg.base_seed, "Base seed; run r uses seed + r");
  app.add_option("--betas", cfg.betas, "Confidence levels beta, comma separated")->delimiter(',');
  app.add_option("--tfrac", cfg.sliding.t_frac, "Fraction of the budget under the sliding schedule");
  app.add_option("--std", cfg.sliding.half_width, "Window half-width");
  app.add_option("--a", cfg.sliding.a, "Schedule exponent");
  app.add_option("--eps", cfg.sliding.epsilon, "Margin for maximum-c parent selection");
  app.add_option("--penalty", cfg.penalty, "Value recorded for runs without a feasible solution");
  app.add_option("--threads", cfg.threads, "Worker threads");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--dump", cfg.dump_dir, "Directory for instances and final populations");
  app.add_option("--trace", cfg.trace_dir, "Directory for per-run JSON-lines traces");
  app.add_option("--trace-every", cfg.trace_every, "Trace every k-th iteration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    cfg.problem = problem == "domset" ? ccsw::ProblemType::DominatingSet : ccsw::ProblemType::UniformK;
    cfg.weights = weights == "degree" ? ccsw::WeightMode::Degree : ccsw::WeightMode::Uniform;
    const auto default_init = ccsw::parse_init(init);
    for (const auto& a : algos) cfg.algorithms.push_back(ccsw::parse_algorithm(a, default_init));

    const auto result = ccsw::run_experiment(cfg);
    ccsw::write_experiment(out_dir, result);
    ccsw::write_table_csv(std::cout, result);
  } catch (const ccsw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ccsw::ParseError& e) {
    std::cerr << "parse error (line " << e.line() << "): " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
