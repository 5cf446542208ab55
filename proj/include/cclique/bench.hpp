#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cclique/exact.hpp"
#include "cclique/fw.hpp"
#include "cclique/graph.hpp"

namespace cclique {

struct BenchmarkConfig {
  std::vector<std::string> graph_paths;
  std::vector<double> b_list{0.25, 0.5, 0.75};
  std::vector<double> p_list{0.25, 0.5, 0.75};
  int m = 10;              // realizations per instance
  int n_experiments = 5;   // instances per configuration
  int n_starts = 10;       // multistart width per instance
  double gamma = 1.0;
  SolverConfig solver;     // per-run seeds and n_starts are derived internally
  std::string output_path;
  std::uint64_t master_seed = 0;
  std::uint64_t oracle_budget = kDefaultNodeBudget;
  bool keep_runs = false;  // retain full multistart results per experiment

  void validate() const;
};

struct NamedGraph {
  std::string name;
  Graph graph;
};

struct RunDetail {
  int experiment = 0;
  int start = 0;
  int size = 0;
  bool is_common = false;
  bool is_maximal = false;
  int iterations = 0;
  double final_gap = 0.0;
  Termination termination = Termination::k_max_reached;
  bool failed = false;
  std::string reason;
};

struct BenchRow {
  std::string graph;
  double b = 0.0;
  double p = 0.0;
  int max_size = 0;    // max over experiments of the per-experiment best
  double mean = 0.0;   // over per-experiment bests
  double stddev = 0.0; // population std over per-experiment bests
  int real_max = 0;    // exact optimum (max over the row's instances)
  bool oracle_completed = true;
  int runs = 0;
  int starts = 0;
  std::uint64_t seed = 0;
  bool flagged = false;  // a run failed or produced a non-common support
  std::vector<RunDetail> details;
  std::vector<std::uint64_t> experiment_seeds;    // instance seed per experiment
  std::vector<MultistartResult> experiment_runs;  // filled when keep_runs is set
};

std::vector<NamedGraph> load_benchmark_graphs(const std::vector<std::string>& paths);

// One row per (graph, b, p): n_experiments seeded instances, multistart on
// each, stats over the per-experiment best verified sizes, exact optimum via
// the discrete oracle. Rows are ordered by (graph, b, p) and byte-identical
// across repeat invocations and worker counts.
std::vector<BenchRow> run_benchmark(const BenchmarkConfig& cfg,
                                    const std::vector<NamedGraph>& graphs, int workers = 1);

enum class ReportFormat { csv, text };

// CSV header is exactly "graph,b,p,max,mean,std,real_max,runs,starts,seed";
// mean/std carry two decimals; an incomplete oracle prints ">=incumbent".
// The text format adds per-run details.
void emit_report(const std::vector<BenchRow>& rows, ReportFormat format, std::ostream& out);

const char* to_string(Termination t);

}  // namespace cclique
