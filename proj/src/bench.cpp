#include "cclique/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <stdexcept>

#include "cclique/parallel.hpp"
#include "cclique/uncertainty.hpp"

namespace cclique {

void BenchmarkConfig::validate() const {
  if (b_list.empty() || p_list.empty()) throw std::invalid_argument("bench: empty b or p list");
  for (double b : b_list)
    if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("bench: b must be in (0,1]");
  for (double p : p_list)
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bench: p must be in [0,1]");
  if (m < 1) throw std::invalid_argument("bench: m >= 1");
  if (n_experiments < 1) throw std::invalid_argument("bench: experiments >= 1");
  if (n_starts < 1) throw std::invalid_argument("bench: starts >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("bench: gamma > 0");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::gap_below_xi: return "gap_below_xi";
    case Termination::k_max_reached: return "k_max_reached";
    case Termination::step_failure: return "step_failure";
  }
  return "unknown";
}

std::vector<NamedGraph> load_benchmark_graphs(const std::vector<std::string>& paths) {
  std::vector<NamedGraph> graphs;
  graphs.reserve(paths.size());
  for (const auto& path : paths)
    graphs.push_back({std::filesystem::path(path).stem().string(), parse_dimacs_file(path)});
  return graphs;
}

namespace {

constexpr std::uint64_t kSolverStream = 0x736f6c7665723031ULL;

struct ExperimentOutcome {
  int best = 0;
  int real_max = 0;
  bool oracle_completed = true;
  MultistartResult ms;
};

std::string format_fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string format_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::vector<BenchRow> run_benchmark(const BenchmarkConfig& cfg,
                                    const std::vector<NamedGraph>& graphs, int workers) {
  cfg.validate();
  if (graphs.empty()) throw std::invalid_argument("bench: no graphs");

  struct Job {
    int row;
    int gi, bi, pi, exp;
    std::uint64_t seed = 0;
  };
  std::vector<Job> jobs;
  const int n_rows =
      static_cast<int>(graphs.size() * cfg.b_list.size() * cfg.p_list.size());
  int row = 0;
  for (int gi = 0; gi < static_cast<int>(graphs.size()); ++gi)
    for (int bi = 0; bi < static_cast<int>(cfg.b_list.size()); ++bi)
      for (int pi = 0; pi < static_cast<int>(cfg.p_list.size()); ++pi, ++row)
        for (int e = 0; e < cfg.n_experiments; ++e) {
          const std::uint64_t exp_seed = Rng::mix(
              Rng::mix(Rng::mix(Rng::mix(cfg.master_seed, gi + 1), bi + 1), pi + 1), e + 1);
          jobs.push_back({row, gi, bi, pi, e, exp_seed});
        }

  std::vector<ExperimentOutcome> outcomes(jobs.size());
  std::vector<std::string> job_errors(jobs.size());

  parallel_for(static_cast<int>(jobs.size()), workers, [&](int j) {
    const Job& job = jobs[static_cast<std::size_t>(j)];
    try {
      const std::uint64_t exp_seed = job.seed;
      InstanceSpec spec;
      spec.base = graphs[static_cast<std::size_t>(job.gi)].graph;
      spec.base_name = graphs[static_cast<std::size_t>(job.gi)].name;
      spec.b = cfg.b_list[static_cast<std::size_t>(job.bi)];
      spec.p = cfg.p_list[static_cast<std::size_t>(job.pi)];
      spec.m = cfg.m;
      spec.seed = exp_seed;
      const UncertaintySet us = generate_instance(spec);
      const ModelParams params = ModelParams::defaults(us.vertex_count(), cfg.gamma);

      SolverConfig sc = cfg.solver;
      sc.n_starts = cfg.n_starts;
      sc.seed = Rng::mix(exp_seed, kSolverStream);
      ExperimentOutcome out;
      out.ms = multistart(us, sc, params, 1);
      out.best = out.ms.best_size;
      const CliqueResult oracle = max_common_clique(us, cfg.oracle_budget);
      out.real_max = oracle.size;
      out.oracle_completed = oracle.completed;
      outcomes[static_cast<std::size_t>(j)] = std::move(out);
    } catch (const std::exception& ex) {
      job_errors[static_cast<std::size_t>(j)] = ex.what();
    }
  });

  for (std::size_t j = 0; j < jobs.size(); ++j)
    if (!job_errors[j].empty())
      throw std::runtime_error("bench: experiment failed: " + job_errors[j]);

  std::vector<BenchRow> rows(static_cast<std::size_t>(n_rows));
  row = 0;
  std::size_t job_at = 0;
  for (int gi = 0; gi < static_cast<int>(graphs.size()); ++gi) {
    for (int bi = 0; bi < static_cast<int>(cfg.b_list.size()); ++bi) {
      for (int pi = 0; pi < static_cast<int>(cfg.p_list.size()); ++pi, ++row) {
        BenchRow& r = rows[static_cast<std::size_t>(row)];
        r.graph = graphs[static_cast<std::size_t>(gi)].name;
        r.b = cfg.b_list[static_cast<std::size_t>(bi)];
        r.p = cfg.p_list[static_cast<std::size_t>(pi)];
        r.runs = cfg.n_experiments;
        r.starts = cfg.n_starts;
        r.seed = cfg.master_seed;

        double sum = 0.0, sum_sq = 0.0;
        for (int e = 0; e < cfg.n_experiments; ++e, ++job_at) {
          const ExperimentOutcome& out = outcomes[job_at];
          r.experiment_seeds.push_back(jobs[job_at].seed);
          r.max_size = std::max(r.max_size, out.best);
          r.real_max = std::max(r.real_max, out.real_max);
          r.oracle_completed = r.oracle_completed && out.oracle_completed;
          sum += out.best;
          sum_sq += static_cast<double>(out.best) * out.best;
          if (!out.ms.all_common) r.flagged = true;
          for (std::size_t i = 0; i < out.ms.runs.size(); ++i) {
            RunDetail d;
            d.experiment = e;
            d.start = static_cast<int>(i);
            d.failed = out.ms.failed[i];
            d.reason = out.ms.failure_reasons[i];
            if (d.failed) {
              r.flagged = true;
            } else {
              const RunResult& run = out.ms.runs[i];
              d.size = run.clique_size;
              d.is_common = run.is_common_clique;
              d.is_maximal = run.is_maximal;
              d.iterations = static_cast<int>(run.trace.size());
              d.final_gap = run.trace.empty() ? 0.0 : run.trace.back().gap;
              d.termination = run.termination;
            }
            r.details.push_back(std::move(d));
          }
          if (cfg.keep_runs) r.experiment_runs.push_back(std::move(outcomes[job_at].ms));
        }
        r.mean = sum / cfg.n_experiments;
        r.stddev = std::sqrt(std::max(0.0, sum_sq / cfg.n_experiments - r.mean * r.mean));
      }
    }
  }
  return rows;
}

void emit_report(const std::vector<BenchRow>& rows, ReportFormat format, std::ostream& out) {
  if (rows.empty()) throw std::invalid_argument("emit_report: no rows");
  if (format == ReportFormat::csv) {
    out << "graph,b,p,max,mean,std,real_max,runs,starts,seed\n";
    for (const auto& r : rows) {
      out << r.graph << ',' << format_short(r.b) << ',' << format_short(r.p) << ',' << r.max_size
          << ',' << format_fixed2(r.mean) << ',' << format_fixed2(r.stddev) << ',';
      if (r.oracle_completed)
        out << r.real_max;
      else
        out << ">=" << r.real_max;
      out << ',' << r.runs << ',' << r.starts << ',' << r.seed << '\n';
    }
    return;
  }
  for (const auto& r : rows) {
    out << "graph " << r.graph << "  b=" << format_short(r.b) << "  p=" << format_short(r.p)
        << "\n  max " << r.max_size << "  mean " << format_fixed2(r.mean) << "  std "
        << format_fixed2(r.stddev) << "  real_max " << (r.oracle_completed ? "" : ">=")
        << r.real_max << "  runs " << r.runs << "  starts " << r.starts << "  seed " << r.seed
        << (r.flagged ? "  FLAGGED" : "") << '\n';
    for (const auto& d : r.details) {
      out << "  exp " << d.experiment << " start " << d.start;
      if (d.failed) {
        out << "  FAILED " << d.reason << '\n';
        continue;
      }
      out << "  size " << d.size << "  common " << (d.is_common ? "yes" : "no") << "  maximal "
          << (d.is_maximal ? "yes" : "no") << "  iters " << d.iterations << "  gap "
          << format_short(d.final_gap) << "  " << to_string(d.termination) << '\n';
    }
  }
}

}  // namespace cclique
