#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "cclique/bench.hpp"

using namespace cclique;

namespace {

std::vector<NamedGraph> one_graph(int n, double density, std::uint64_t seed) {
  Rng rng(seed);
  return {{"g" + std::to_string(n), random_graph(n, density, rng)}};
}

std::string render_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  emit_report(rows, ReportFormat::csv, out);
  return out.str();
}

}  // namespace

TEST_CASE("degenerate configuration ties out against the exact oracle") {
  const auto graphs = one_graph(12, 0.6, 3);
  BenchmarkConfig cfg;
  cfg.b_list = {1.0};
  cfg.p_list = {0.0};
  cfg.m = 1;
  cfg.n_experiments = 1;
  cfg.n_starts = 3;
  cfg.master_seed = 17;
  const auto rows = run_benchmark(cfg, graphs);
  REQUIRE(rows.size() == 1);
  // b=1, p=0, m=1: the instance is the base graph itself
  const int omega = max_clique_exact(graphs[0].graph).size;
  CHECK(rows[0].real_max == omega);
  CHECK(rows[0].oracle_completed);
  CHECK(rows[0].max_size <= rows[0].real_max);
  CHECK(rows[0].details.size() == 3);
}

TEST_CASE("determinism: identical seeds give identical bytes, any worker count") {
  const auto graphs = one_graph(14, 0.5, 5);
  BenchmarkConfig cfg;
  cfg.b_list = {0.5, 0.75};
  cfg.p_list = {0.25};
  cfg.m = 3;
  cfg.n_experiments = 2;
  cfg.n_starts = 2;
  cfg.master_seed = 99;
  const std::string a = render_csv(run_benchmark(cfg, graphs, 1));
  const std::string b = render_csv(run_benchmark(cfg, graphs, 1));
  const std::string c = render_csv(run_benchmark(cfg, graphs, 3));
  CHECK(a == b);
  CHECK(a == c);

  BenchmarkConfig other = cfg;
  other.master_seed = 100;
  CHECK(render_csv(run_benchmark(other, graphs, 1)) != a);
}

TEST_CASE("row ordering and found <= real") {
  Rng rng(6);
  std::vector<NamedGraph> graphs{{"a", random_graph(10, 0.6, rng)},
                                 {"b", random_graph(11, 0.5, rng)}};
  BenchmarkConfig cfg;
  cfg.b_list = {0.5};
  cfg.p_list = {0.25, 0.75};
  cfg.m = 3;
  cfg.n_experiments = 2;
  cfg.n_starts = 2;
  cfg.master_seed = 12;
  const auto rows = run_benchmark(cfg, graphs);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].graph == "a");
  CHECK(rows[1].graph == "a");
  CHECK(rows[2].graph == "b");
  CHECK(rows[0].p == 0.25);
  CHECK(rows[1].p == 0.75);
  for (const auto& r : rows) {
    CHECK(r.oracle_completed);
    CHECK(r.max_size <= r.real_max);
    CHECK(r.experiment_seeds.size() == 2);
  }
}

TEST_CASE("csv formatting") {
  BenchRow row;
  row.graph = "demo";
  row.b = 0.25;
  row.p = 0.5;
  row.max_size = 5;
  row.mean = 4.5;   // sizes {4, 5}
  row.stddev = 0.5;
  row.real_max = 6;
  row.runs = 2;
  row.starts = 10;
  row.seed = 7;

  SUBCASE("header and two-decimal statistics") {
    const std::string csv = render_csv({row});
    CHECK(csv == "graph,b,p,max,mean,std,real_max,runs,starts,seed\n"
                 "demo,0.25,0.5,5,4.50,0.50,6,2,10,7\n");
  }
  SUBCASE("zero std renders as 0.00") {
    row.stddev = 0.0;
    row.mean = 4.0;
    CHECK(render_csv({row}).find(",4.00,0.00,") != std::string::npos);
  }
  SUBCASE("incomplete oracle is marked") {
    row.oracle_completed = false;
    CHECK(render_csv({row}).find(",>=6,") != std::string::npos);
  }
  SUBCASE("empty reports are rejected") {
    std::ostringstream out;
    CHECK_THROWS_AS(emit_report({}, ReportFormat::csv, out), std::invalid_argument);
  }
}

TEST_CASE("text report carries per-run detail") {
  const auto graphs = one_graph(10, 0.5, 8);
  BenchmarkConfig cfg;
  cfg.b_list = {0.75};
  cfg.p_list = {0.5};
  cfg.m = 2;
  cfg.n_experiments = 1;
  cfg.n_starts = 2;
  cfg.master_seed = 4;
  const auto rows = run_benchmark(cfg, graphs);
  std::ostringstream out;
  emit_report(rows, ReportFormat::text, out);
  const std::string text = out.str();
  CHECK(text.find("exp 0 start 0") != std::string::npos);
  CHECK(text.find("common") != std::string::npos);
  CHECK(text.find("maximal") != std::string::npos);
  CHECK(text.find("gap_below_xi") != std::string::npos);
}

TEST_CASE("config validation") {
  BenchmarkConfig cfg;
  cfg.b_list = {};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = BenchmarkConfig{};
  cfg.p_list = {1.5};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = BenchmarkConfig{};
  cfg.m = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
