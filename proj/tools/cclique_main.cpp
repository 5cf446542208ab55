#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cclique/bench.hpp"
#include "cclique/exact.hpp"
#include "cclique/fw.hpp"
#include "cclique/parallel.hpp"
#include "cclique/uncertainty.hpp"

namespace {

using namespace cclique;

std::vector<int> parse_vertex_list(const std::string& text, int n) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const int v = std::stoi(tok);
    if (v < 1 || v > n) throw std::runtime_error("vertex " + tok + " outside [1," + std::to_string(n) + "]");
    out.push_back(v - 1);
  }
  return out;
}

void print_vertices(const std::vector<int>& vs) {
  for (std::size_t i = 0; i < vs.size(); ++i) std::cout << (i ? "," : "") << vs[i] + 1;
}

int cmd_gen(const std::string& graph_path, double b, double p, int m, std::uint64_t seed,
            const std::string& out_dir) {
  InstanceSpec spec;
  spec.base = parse_dimacs_file(graph_path);
  spec.base_name = std::filesystem::path(graph_path).stem().string();
  spec.b = b;
  spec.p = p;
  spec.m = m;
  spec.seed = seed;
  if (spec.base.edge_count() == 0 && b > 0.0)
    std::cerr << "warning: base graph has no edges; backbone is empty\n";
  const UncertaintySet us = generate_instance(spec);
  std::filesystem::create_directories(out_dir);
  save_instance(us, out_dir);
  const Graph backbone = intersection_graph(us);
  std::cout << "wrote " << out_dir << "/instance.json  n=" << us.vertex_count()
            << " m=" << us.member_count() << " backbone_edges=" << backbone.edge_count() << '\n';
  return 0;
}

int cmd_solve(const std::string& instance, SolverConfig cfg, double gamma, bool fixed_eta_set,
              double fixed_eta) {
  const UncertaintySet us = load_instance(instance);
  const ModelParams params = ModelParams::defaults(us.vertex_count(), gamma);
  if (fixed_eta_set) {
    cfg.eta_mode = EtaMode::fixed;
    cfg.eta_fixed = fixed_eta;
  }
  const MultistartResult ms = multistart(us, cfg, params, env_worker_count());
  std::cout << "starts " << cfg.n_starts << "  best " << ms.best_size << "  max " << ms.max_size
            << "  mean " << ms.mean_size << "  std " << ms.std_size << '\n';
  for (std::size_t i = 0; i < ms.runs.size(); ++i) {
    std::cout << "run " << i;
    if (ms.failed[i]) {
      std::cout << "  FAILED: " << ms.failure_reasons[i] << '\n';
      continue;
    }
    const RunResult& r = ms.runs[i];
    std::cout << "  size " << r.clique_size << "  common " << (r.is_common_clique ? "yes" : "no")
              << "  maximal " << (r.is_maximal ? "yes" : "no") << "  iters " << r.trace.size()
              << "  gap " << (r.trace.empty() ? 0.0 : r.trace.back().gap) << "  "
              << to_string(r.termination) << '\n';
  }
  if (ms.best_size > 0) {
    std::cout << "best clique: ";
    print_vertices(ms.best_clique);
    std::cout << '\n';
  }
  return 0;
}

int cmd_oracle(const std::string& instance, std::uint64_t budget) {
  const UncertaintySet us = load_instance(instance);
  const CliqueResult res = max_common_clique(us, budget);
  std::cout << "size " << res.size << (res.completed ? "" : " (budget exceeded, incumbent)")
            << "  nodes " << res.nodes_explored << '\n';
  std::cout << "vertices: ";
  print_vertices(res.vertices);
  std::cout << '\n';
  return 0;
}

int cmd_check(const std::string& instance, const std::string& clique) {
  const UncertaintySet us = load_instance(instance);
  const std::vector<int> vs = parse_vertex_list(clique, us.vertex_count());
  const CliqueCheck check = verify_common_clique(vs, us);
  std::cout << "size " << vs.size() << "  common " << (check.is_common ? "yes" : "no")
            << "  maximal " << (check.is_maximal ? "yes" : "no") << '\n';
  return 0;
}

// The config file wins over flags, flags win over defaults.
void overlay_config_file(const std::string& path, BenchmarkConfig& cfg, std::string& format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  nlohmann::json j;
  in >> j;
  if (j.contains("graphs")) cfg.graph_paths = j["graphs"].get<std::vector<std::string>>();
  if (j.contains("b")) cfg.b_list = j["b"].get<std::vector<double>>();
  if (j.contains("p")) cfg.p_list = j["p"].get<std::vector<double>>();
  if (j.contains("m")) cfg.m = j["m"].get<int>();
  if (j.contains("experiments")) cfg.n_experiments = j["experiments"].get<int>();
  if (j.contains("starts")) cfg.n_starts = j["starts"].get<int>();
  if (j.contains("seed")) cfg.master_seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out")) cfg.output_path = j["out"].get<std::string>();
  if (j.contains("gamma")) cfg.gamma = j["gamma"].get<double>();
  if (j.contains("xi")) cfg.solver.xi = j["xi"].get<double>();
  if (j.contains("kmax")) cfg.solver.k_max = j["kmax"].get<int>();
  if (j.contains("delta")) cfg.solver.delta = j["delta"].get<double>();
  if (j.contains("budget")) cfg.oracle_budget = j["budget"].get<std::uint64_t>();
  if (j.contains("format")) format = j["format"].get<std::string>();
}

int cmd_bench(BenchmarkConfig cfg, const std::string& config_path, std::string format) {
  if (!config_path.empty()) overlay_config_file(config_path, cfg, format);
  if (cfg.graph_paths.empty()) throw std::runtime_error("bench: no graph files given");
  const auto graphs = load_benchmark_graphs(cfg.graph_paths);
  const auto rows = run_benchmark(cfg, graphs, env_worker_count());
  const ReportFormat fmt = format == "text" ? ReportFormat::text : ReportFormat::csv;
  if (cfg.output_path.empty()) {
    emit_report(rows, fmt, std::cout);
  } else {
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + cfg.output_path);
    emit_report(rows, fmt, out);
    std::cout << "wrote " << cfg.output_path << " (" << rows.size() << " rows)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximum common cliques across adversarially perturbed graph families"};
  app.require_subcommand(1);

  // gen
  std::string graph_path, out_dir;
  double b = 0.5, p = 0.5;
  int m = 10;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("gen", "generate a perturbed instance from a DIMACS graph");
  gen->add_option("--graph", graph_path, "DIMACS .clq file")->required();
  gen->add_option("--b", b, "backbone fraction in (0,1]")->capture_default_str();
  gen->add_option("--p", p, "edge-addition probability in [0,1]")->capture_default_str();
  gen->add_option("--m", m, "number of realizations")->capture_default_str();
  gen->add_option("--seed", seed, "generator seed")->capture_default_str();
  gen->add_option("--out", out_dir, "output directory")->required();

  // solve
  std::string instance;
  SolverConfig sc;
  double gamma = 1.0;
  double fixed_eta = 0.0;
  auto* solve = app.add_subcommand("solve", "multistart solve of one instance");
  solve->add_option("--instance", instance, "instance directory or manifest")->required();
  solve->add_option("--starts", sc.n_starts, "number of random starts")->capture_default_str();
  solve->add_option("--xi", sc.xi, "stopping threshold")->capture_default_str();
  solve->add_option("--kmax", sc.k_max, "iteration cap")->capture_default_str();
  solve->add_option("--delta", sc.delta, "approximate-activity tolerance")->capture_default_str();
  solve->add_option("--tau", sc.tau, "eta decay exponent")->capture_default_str();
  solve->add_option("--gamma", gamma, "y-penalty weight")->capture_default_str();
  solve->add_option("--seed", sc.seed, "multistart seed")->capture_default_str();
  auto* fixed_eta_opt = solve->add_option("--fixed-eta", fixed_eta, "use a fixed eta instead of the decaying schedule");
  solve->add_flag("--extend", sc.greedy_extend, "greedily extend the support inside the backbone");

  // oracle
  std::string oracle_instance;
  std::uint64_t budget = kDefaultNodeBudget;
  auto* oracle = app.add_subcommand("oracle", "exact maximum common clique");
  oracle->add_option("--instance", oracle_instance, "instance directory or manifest")->required();
  oracle->add_option("--budget", budget, "node budget")->capture_default_str();

  // bench
  BenchmarkConfig bc;
  std::string config_path, format = "csv";
  auto* bench = app.add_subcommand("bench", "full experiment protocol");
  bench->add_option("--config", config_path, "JSON config (overrides flags)");
  bench->add_option("--graph", bc.graph_paths, "DIMACS .clq files");
  bench->add_option("--b", bc.b_list, "backbone fractions")->capture_default_str();
  bench->add_option("--p", bc.p_list, "edge-addition probabilities")->capture_default_str();
  bench->add_option("--m", bc.m, "realizations per instance")->capture_default_str();
  bench->add_option("--experiments", bc.n_experiments, "instances per configuration")->capture_default_str();
  bench->add_option("--starts", bc.n_starts, "multistart width")->capture_default_str();
  bench->add_option("--seed", bc.master_seed, "master seed")->capture_default_str();
  bench->add_option("--out", bc.output_path, "report file (stdout when omitted)");
  bench->add_option("--format", format, "csv or text")->capture_default_str();
  bench->add_option("--budget", bc.oracle_budget, "oracle node budget")->capture_default_str();
  bench->add_option("--xi", bc.solver.xi, "stopping threshold")->capture_default_str();
  bench->add_option("--kmax", bc.solver.k_max, "iteration cap")->capture_default_str();
  bench->add_option("--gamma", bc.gamma, "y-penalty weight")->capture_default_str();

  // check
  std::string check_instance, clique;
  auto* check = app.add_subcommand("check", "verify a claimed clique against an instance");
  check->add_option("--instance", check_instance, "instance directory or manifest")->required();
  check->add_option("--clique", clique, "comma-separated 1-based vertices")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(graph_path, b, p, m, seed, out_dir);
    if (solve->parsed()) return cmd_solve(instance, sc, gamma, fixed_eta_opt->count() > 0, fixed_eta);
    if (oracle->parsed()) return cmd_oracle(oracle_instance, budget);
    if (bench->parsed()) return cmd_bench(bc, config_path, format);
    if (check->parsed()) return cmd_check(check_instance, clique);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
