#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cclique/graph.hpp"
#include "cclique/uncertainty.hpp"

using namespace cclique;

namespace {

Graph from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

}  // namespace

TEST_CASE("dimacs parsing: basic forms") {
  const Graph g = from_text("p edge 3 2\ne 1 2\ne 2 3\n");
  CHECK(g.vertex_count() == 3);
  CHECK(g.edges() == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});

  const Graph empty = from_text("p edge 2 0\n");
  CHECK(empty.vertex_count() == 2);
  CHECK(empty.edge_count() == 0);

  // comments, blank lines, duplicate edges, reversed orientation
  const Graph dup = from_text("c header\n\np edge 4 3\ne 2 1\ne 1 2\nc mid\ne 3 4\n");
  CHECK(dup.edges() == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
}

TEST_CASE("dimacs parsing: malformed inputs carry line numbers") {
  CHECK_THROWS_WITH_AS(from_text("e 1 2\np edge 2 1\n"), doctest::Contains("line 1"), DimacsError);
  CHECK_THROWS_AS(from_text("p edge 2 1\np edge 2 1\n"), DimacsError);
  CHECK_THROWS_AS(from_text("p edge 2 1\ne 1 3\n"), DimacsError);
  CHECK_THROWS_AS(from_text("p edge 2 1\ne 0 1\n"), DimacsError);
  CHECK_THROWS_AS(from_text("p edge 2 1\ne 1 1\n"), DimacsError);
  CHECK_THROWS_AS(from_text("p edge 2 1\ne one two\n"), DimacsError);
  CHECK_THROWS_AS(from_text("p clq 2 1\n"), DimacsError);
  CHECK_THROWS_AS(from_text("c only comments\n"), DimacsError);
  CHECK_THROWS_AS(from_text("p edge 2 1\nx 1 2\n"), DimacsError);
}

TEST_CASE("dimacs write/parse round trip") {
  Rng rng(7);
  const Graph g = random_graph(9, 0.4, rng);
  std::stringstream s;
  write_dimacs(g, s);
  CHECK(parse_dimacs(s) == g);
}

TEST_CASE("graph construction validates") {
  CHECK_THROWS_AS(Graph(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(0, {}), std::invalid_argument);
  const Graph g(3, {{2, 0}, {0, 2}});
  CHECK(g.edge_count() == 1);
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(2, 0));
  CHECK_FALSE(g.has_edge(0, 1));
  CHECK_FALSE(g.has_edge(1, 1));
}

TEST_CASE("regularized matrix") {
  const Graph empty(2, {});
  Eigen::MatrixXd u = regularized_matrix(empty);
  CHECK(u(0, 0) == 0.5);
  CHECK(u(1, 1) == 0.5);
  CHECK(u(0, 1) == 0.0);

  const Graph k2(2, {{0, 1}});
  u = regularized_matrix(k2);
  CHECK(u(0, 1) == 1.0);
  CHECK(u(1, 0) == 1.0);
  CHECK(u(0, 0) == 0.5);

  // distinct edge sets give distinct matrices
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph a = random_graph(6, 0.5, rng);
    const Graph b = random_graph(6, 0.5, rng);
    if (a == b) continue;
    CHECK(regularized_matrix(a) != regularized_matrix(b));
  }
}

TEST_CASE("intersection graph") {
  const Graph g(4, {{0, 1}, {1, 2}});
  SUBCASE("identical copies are a fixed point") {
    const UncertaintySet us({g, g, g});
    CHECK(intersection_graph(us) == g);
  }
  SUBCASE("disjoint edge sets intersect to the empty graph") {
    const UncertaintySet us({Graph(4, {{0, 1}}), Graph(4, {{2, 3}})});
    CHECK(intersection_graph(us).edge_count() == 0);
  }
  SUBCASE("pairwise intersection, cross-checked by brute force") {
    const Graph a(3, {{0, 1}, {1, 2}});
    const Graph b(3, {{1, 2}, {0, 2}});
    const Graph inter = intersection_graph(UncertaintySet({a, b}));
    std::vector<std::pair<int, int>> expect;
    for (const auto& e : a.edges())
      if (b.has_edge(e.first, e.second)) expect.push_back(e);
    CHECK(inter.edges() == expect);
    CHECK(inter.edges() == std::vector<std::pair<int, int>>{{1, 2}});
  }
}

TEST_CASE("uncertainty set validates") {
  CHECK_THROWS_AS(UncertaintySet({}), std::invalid_argument);
  CHECK_THROWS_AS(UncertaintySet({Graph(2, {}), Graph(3, {})}), std::invalid_argument);
}

TEST_CASE("generate_instance: degenerate parameter settings") {
  Rng rng(3);
  const Graph base = random_graph(12, 0.5, rng);
  SUBCASE("b=1 reproduces the base graph") {
    const auto us = generate_instance({base, "base", 1.0, 0.3, 4, 42});
    for (const auto& g : us.members()) CHECK(g == base);
  }
  SUBCASE("p=0 reproduces the backbone") {
    const auto us = generate_instance({base, "base", 0.5, 0.0, 4, 42});
    const Graph backbone = us.member(0);
    for (const auto& g : us.members()) CHECK(g == backbone);
    CHECK(backbone.edge_count() == base.edge_count() / 2);
  }
  SUBCASE("p=1 reproduces the base graph") {
    const auto us = generate_instance({base, "base", 0.5, 1.0, 4, 42});
    for (const auto& g : us.members()) CHECK(g == base);
  }
  SUBCASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(generate_instance({base, "base", 0.0, 0.5, 4, 1}), std::invalid_argument);
    CHECK_THROWS_AS(generate_instance({base, "base", 0.5, 1.5, 4, 1}), std::invalid_argument);
    CHECK_THROWS_AS(generate_instance({base, "base", 0.5, 0.5, 0, 1}), std::invalid_argument);
  }
}

TEST_CASE("generate_instance: containment, backbone floor, determinism") {
  Rng rng(5);
  const Graph base = random_graph(15, 0.4, rng);
  const InstanceSpec spec{base, "base", 0.4, 0.5, 6, 99};
  const auto us = generate_instance(spec);
  CHECK(us == generate_instance(spec));
  CHECK(us != generate_instance({base, "base", 0.4, 0.5, 6, 100}));

  // every member edge set sits inside the base edge set
  for (const auto& g : us.members())
    for (const auto& e : g.edges()) CHECK(base.has_edge(e.first, e.second));

  // the intersection contains a backbone of exactly floor(b*|E|) edges
  const Graph inter = intersection_graph(us);
  const int backbone_size = static_cast<int>(0.4 * base.edge_count());
  CHECK(inter.edge_count() >= backbone_size);
  // regenerating with p=0 isolates the backbone itself; same seed, same draw
  const Graph backbone = generate_instance({base, "base", 0.4, 0.0, 1, 99}).member(0);
  CHECK(backbone.edge_count() == backbone_size);
  for (const auto& e : backbone.edges())
    for (const auto& g : us.members()) CHECK(g.has_edge(e.first, e.second));
}

TEST_CASE("instance manifest round trip") {
  Rng rng(10);
  const Graph base = random_graph(10, 0.5, rng);
  const auto us = generate_instance({base, "demo", 0.5, 0.25, 3, 7});
  const auto dir = std::filesystem::temp_directory_path() / "cclique_graph_test";
  std::filesystem::remove_all(dir);

  save_instance(us, dir);
  CHECK(load_instance(dir) == us);

  SUBCASE("provenance-free sets round trip without provenance") {
    const UncertaintySet bare({base});
    save_instance(bare, dir / "bare.json");
    const auto loaded = load_instance(dir / "bare.json");
    CHECK(loaded == bare);
    CHECK_FALSE(loaded.provenance().has_value());
  }

  SUBCASE("version mismatch is rejected") {
    std::ofstream out(dir / "bad.json");
    out << R"({"version": 2, "n": 2, "m": 1, "graphs": [[[1,2]]]})";
    out.close();
    CHECK_THROWS_WITH_AS(load_instance(dir / "bad.json"), doctest::Contains("version"),
                         std::runtime_error);
  }

  SUBCASE("edge outside [1,n] is rejected") {
    std::ofstream out(dir / "bad_n.json");
    out << R"({"version": 1, "n": 2, "m": 2, "graphs": [[[1,2]], [[1,3]]]})";
    out.close();
    CHECK_THROWS_AS(load_instance(dir / "bad_n.json"), std::runtime_error);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("rng determinism and basic statistics") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng r(9);
  double mean = 0.0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) mean += r.next_double();
  mean /= draws;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.02));

  bool low = false, high = false;
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.next_below(7);
    CHECK(v < 7);
    low = low || v == 0;
    high = high || v == 6;
  }
  CHECK(low);
  CHECK(high);
}
