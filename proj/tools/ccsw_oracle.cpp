// Exact per-constraint fronts for a saved instance.

#include <CLI11.hpp>

#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "ccsw/oracles.hpp"
#include "ccsw/problems.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Brute-force or greedy Pareto fronts"};
  std::string stem, graph, method = "brute", out;
  app.add_option("instance", stem, "Instance stem (reads <stem>.json and <stem>.csv)")->required();
  app.add_option("--graph", graph, "Edge-list file, overrides the path stored in the instance");
  app.add_option("--method", method, "brute or greedy")->check(CLI::IsMember({"brute", "greedy"}));
  app.add_option("--out", out, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const auto loaded = ccsw::load_instance_files(stem);
    std::shared_ptr<const ccsw::Graph> g;
    if (!graph.empty()) g = std::make_shared<const ccsw::Graph>(ccsw::load_edge_list_file(graph));
    const auto inst = ccsw::make_instance(loaded, g);

    ccsw::FrontMap fronts;
    if (method == "greedy") {
      if (inst.kind() != ccsw::ProblemKind::UniformConstraint) throw ccsw::ConfigError("greedy needs a uniform-constraint instance");
      fronts = ccsw::greedy_front(inst.weights());
    } else {
      fronts = ccsw::brute_force_front(inst);
    }

    if (out.empty()) {
      ccsw::write_front_csv(std::cout, fronts);
    } else {
      std::ofstream file(out);
      if (!file) throw std::runtime_error("cannot write '" + out + "'");
      ccsw::write_front_csv(file, fronts);
    }
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
