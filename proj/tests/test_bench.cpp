#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccsw/bench.hpp"

using namespace ccsw;

namespace {

ExperimentConfig star_config() {
  ExperimentConfig cfg;
  cfg.synthetic_graph = "star:10";
  cfg.algorithms = {parse_algorithm("fast_sw_gsemo3d:zeros", Init::Random), parse_algorithm("gsemo3d", Init::Random)};
  cfg.budget = 3000;
  cfg.runs = 4;
  return cfg;
}

std::string csv(const ExperimentResult& r, void (*writer)(std::ostream&, const ExperimentResult&)) {
  std::ostringstream out;
  writer(out, r);
  return out.str();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, AlgorithmNames) {
  const auto a = parse_algorithm("fast_sw_gsemo3d:zeros", Init::Random);
  EXPECT_EQ(a.algorithm, Algorithm::FastSwGsemo3d);
  EXPECT_EQ(a.init, Init::Zeros);
  EXPECT_EQ(a.label, "fast_sw_gsemo3d:zeros");
  EXPECT_EQ(parse_algorithm("gsemo2d", Init::Zeros).init, Init::Zeros);
  EXPECT_EQ(parse_algorithm("one_plus_one_ea", Init::Random).algorithm, Algorithm::OnePlusOneEa);
  EXPECT_THROW(parse_algorithm("nsga2", Init::Random), ConfigError);
  EXPECT_THROW(parse_algorithm("gsemo3d:ones", Init::Random), ConfigError);
}

TEST(Config, Validation) {
  auto cfg = star_config();
  EXPECT_NO_THROW(cfg.validate());
  auto bad = cfg;
  bad.runs = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = cfg;
  bad.graph_path = "g.txt";
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = cfg;
  bad.betas = {0.1, 0.7};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = cfg;
  bad.betas = {0.1, 0.1};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = cfg;
  bad.sliding.a = 2;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = cfg;
  bad.algorithms.clear();
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = cfg;
  bad.problem = ProblemType::UniformK;
  bad.synthetic_graph.clear();
  bad.items = 5;
  bad.target_k = 6;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad.target_k = 2;
  EXPECT_NO_THROW(bad.validate());
}

TEST(ExtractFinal, Examples) {
  const auto inst = ProblemInstance::uniform_constraint({{1, 1}, {1, 1}}, 2);
  ConfidenceLevel one{0.0, 1.0, 1.0};
  const std::vector<Individual> pop{{BitSolution(2), {5, 4, 2}}, {BitSolution(2), {4, 9, 2}}, {BitSolution(2), {1, 1, 1}}};
  const auto fv = extract_final(inst, one, pop, 1e10);
  EXPECT_TRUE(fv.feasible);
  EXPECT_EQ(fv.value, 7.0);

  const std::vector<Individual> none{{BitSolution(2), {1, 1, 1}}};
  const auto missing = extract_final(inst, one, none, 1e10);
  EXPECT_FALSE(missing.feasible);
  EXPECT_EQ(missing.value, 1e10);

  const auto mean_only = extract_final(inst, ConfidenceLevel::from_beta(0.5), pop, 1e10);
  EXPECT_EQ(mean_only.value, 4.0);

  const auto k1 = ProblemInstance::uniform_constraint({{1, 1}, {1, 1}}, 1);
  EXPECT_EQ(extract_final(k1, one, none, 1e10).value, 2.0);
}

TEST(Experiment, SharedInstancesPerRun) {
  const auto cfg = star_config();
  const auto g = load_config_graph(cfg);
  for (std::size_t r = 0; r < 3; ++r) {
    const auto a = make_run_instance(cfg, g, r), b = make_run_instance(cfg, g, r);
    EXPECT_EQ(a.weights().mu, b.weights().mu);
    EXPECT_EQ(a.weights().var, b.weights().var);
  }
  EXPECT_NE(make_run_instance(cfg, g, 0).weights().var, make_run_instance(cfg, g, 1).weights().var);
}

TEST(Experiment, StarEndToEnd) {
  const auto result = run_experiment(star_config());
  ASSERT_EQ(result.rows.size(), 9u);
  for (const auto& row : result.rows) {
    ASSERT_EQ(row.summaries.size(), 2u);
    EXPECT_EQ(row.summaries[0].summary.feasible, 4u);
    ASSERT_EQ(row.tests.size(), 1u);
  }
  EXPECT_EQ(result.runs.size(), 9u * 2u * 4u);
  for (const auto& rec : result.runs) EXPECT_LE(rec.evals, 3000);
  const auto table = csv(result, write_table_csv);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 10);
  EXPECT_EQ(table.substr(0, table.find('\n')),
            "beta,fast_sw_gsemo3d:zeros_mean,fast_sw_gsemo3d:zeros_std,gsemo3d_mean,gsemo3d_std,"
            "p_fast_sw_gsemo3d:zeros_vs_gsemo3d");
  EXPECT_EQ(csv(result, write_runs_csv).substr(0, 63), "beta,algo,run,final_w,feasible,max_pop_overall,max_pop_window,e");
}

TEST(Experiment, ReproducibleAndThreadIndependent) {
  auto cfg = star_config();
  cfg.algorithms.push_back(parse_algorithm("one_plus_one_ea", Init::Random));
  cfg.algorithms.push_back(parse_algorithm("gsemo2d", Init::Random));
  cfg.algorithms.push_back(parse_algorithm("sw_gsemo3d", Init::Zeros));
  cfg.betas = {0.2, 0.01};
  const auto serial = run_experiment(cfg);
  cfg.threads = 3;
  const auto parallel = run_experiment(cfg);
  for (auto writer : {write_runs_csv, write_summary_csv, write_pvalues_csv, write_table_csv, write_popsize_csv})
    EXPECT_EQ(csv(serial, writer), csv(parallel, writer));
}

TEST(Experiment, SingleRunHasZeroStd) {
  auto cfg = star_config();
  cfg.runs = 1;
  const auto result = run_experiment(cfg);
  for (const auto& row : result.rows)
    for (const auto& s : row.summaries) EXPECT_EQ(s.summary.std, 0.0);
}

TEST(Experiment, UnderBudgetedRunGetsPenalty) {
  auto cfg = star_config();
  cfg.algorithms = {parse_algorithm("gsemo3d:zeros", Init::Random)};
  cfg.synthetic_graph = "path:30";
  cfg.budget = 3;
  cfg.runs = 2;
  cfg.betas = {0.1};
  const auto result = run_experiment(cfg);
  for (const auto& rec : result.runs) {
    EXPECT_FALSE(rec.feasible);
    EXPECT_EQ(rec.final_w, 1e10);
  }
  EXPECT_EQ(result.rows[0].summaries[0].summary.mean, 1e10);
}

TEST(Experiment, UniformModel) {
  ExperimentConfig cfg;
  cfg.problem = ProblemType::UniformK;
  cfg.items = 8;
  cfg.target_k = 3;
  cfg.algorithms = {parse_algorithm("sw_gsemo3d:zeros", Init::Random)};
  cfg.budget = 5000;
  cfg.runs = 2;
  cfg.betas = {0.2};
  const auto result = run_experiment(cfg);
  EXPECT_EQ(result.rows[0].summaries[0].summary.feasible, 2u);
}

TEST(Experiment, FilesAndDumps) {
  const auto dir = std::filesystem::temp_directory_path() / "ccsw_bench_test";
  std::filesystem::remove_all(dir);
  auto cfg = star_config();
  cfg.runs = 2;
  cfg.betas = {0.2};
  cfg.dump_dir = (dir / "dump").string();
  cfg.trace_dir = (dir / "trace").string();
  cfg.trace_every = 100;
  write_experiment(dir / "out", run_experiment(cfg));
  for (const char* f : {"runs.csv", "summary.csv", "pvalues.csv", "table.csv", "popsize.csv"})
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / f)) << f;
  EXPECT_TRUE(std::filesystem::exists(dir / "dump" / "instance_run1.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "dump" / "fast_sw_gsemo3d_zeros_run0_population.csv"));
  const auto trace = slurp(dir / "trace" / "gsemo3d_run1.jsonl");
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 30);
  const auto loaded = load_instance_files(dir / "dump" / "instance_run0");
  EXPECT_EQ(loaded.header.seed, 1u);
  std::filesystem::remove_all(dir);
}
