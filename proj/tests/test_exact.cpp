#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cclique/exact.hpp"

using namespace cclique;

namespace {

Graph complete(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

Graph cycle(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph(n, std::move(edges));
}

Graph petersen() {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 5; ++i) {
    edges.emplace_back(i, (i + 1) % 5);      // outer cycle
    edges.emplace_back(i, i + 5);            // spokes
    edges.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
  }
  return Graph(10, std::move(edges));
}

bool clique_in(const std::vector<int>& vs, const Graph& g) {
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 1; b < vs.size(); ++b)
      if (!g.has_edge(vs[a], vs[b])) return false;
  return true;
}

}  // namespace

TEST_CASE("max_clique_exact on named graphs") {
  CHECK(max_clique_exact(complete(4)).size == 4);
  CHECK(max_clique_exact(cycle(5)).size == 2);
  CHECK(max_clique_exact(Graph(6, {})).size == 1);

  const Graph pg = petersen();
  const auto res = max_clique_exact(pg);
  CHECK(res.size == 2);
  CHECK(clique_in(res.vertices, pg));
  // cross-check by full enumeration
  CHECK(brute_force_common(UncertaintySet({pg})).size == 2);
}

TEST_CASE("returned vertices always form a clique of the right size") {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const Graph g = random_graph(14, 0.5, rng);
    const auto res = max_clique_exact(g);
    CHECK(res.completed);
    CHECK(static_cast<int>(res.vertices.size()) == res.size);
    CHECK(clique_in(res.vertices, g));
  }
}

TEST_CASE("node budget returns the incumbent") {
  Rng rng(13);
  const Graph g = random_graph(30, 0.7, rng);
  const auto res = max_clique_exact(g, 5);
  CHECK_FALSE(res.completed);
  CHECK(clique_in(res.vertices, g));
  const auto full = max_clique_exact(g);
  CHECK(full.completed);
  CHECK(res.size <= full.size);
}

TEST_CASE("max_common_clique") {
  SUBCASE("identical complete members") {
    const UncertaintySet us({complete(4), complete(4), complete(4)});
    CHECK(max_common_clique(us).size == 4);
  }
  SUBCASE("pairwise edge-disjoint members leave singletons") {
    const UncertaintySet us({Graph(4, {{0, 1}}), Graph(4, {{2, 3}})});
    CHECK(max_common_clique(us).size == 1);
  }
  SUBCASE("equals subset enumeration on a random 12-vertex instance") {
    Rng rng(14);
    std::vector<Graph> members;
    for (int k = 0; k < 4; ++k) members.push_back(random_graph(12, 0.6, rng));
    const UncertaintySet us(std::move(members));
    CHECK(max_common_clique(us).size == brute_force_common(us).size);
  }
}

TEST_CASE("brute_force_common edge cases") {
  CHECK(brute_force_common(UncertaintySet({Graph(5, {})})).size == 1);
  CHECK(brute_force_common(UncertaintySet({Graph(1, {})})).size == 1);
  CHECK(brute_force_common(UncertaintySet({Graph(1, {})})).vertices == std::vector<int>{0});
  Rng rng(15);
  CHECK_THROWS_AS(brute_force_common(UncertaintySet({random_graph(17, 0.5, rng)})),
                  std::invalid_argument);
}

TEST_CASE("oracle equivalence across 50 seeded random instances") {
  for (int seed = 0; seed < 50; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed) * 7919 + 1);
    const int n = 6 + static_cast<int>(rng.next_below(7));   // 6..12
    const int m = 1 + static_cast<int>(rng.next_below(6));   // 1..6
    std::vector<Graph> members;
    for (int k = 0; k < m; ++k) members.push_back(random_graph(n, 0.4 + 0.4 * rng.next_double(), rng));
    const UncertaintySet us(std::move(members));
    const auto bnb = max_common_clique(us);
    const auto brute = brute_force_common(us);
    CHECK(bnb.size == brute.size);
    for (const auto& g : us.members()) {
      CHECK(clique_in(bnb.vertices, g));
      CHECK(clique_in(brute.vertices, g));
    }
  }
}

TEST_CASE("reversed_minmax_value") {
  CHECK(reversed_minmax_value(UncertaintySet({complete(4), complete(4)})) ==
        doctest::Approx(0.875).epsilon(1e-14));
  CHECK(reversed_minmax_value(UncertaintySet({complete(4), Graph(4, {})})) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // smallest clique number 2 gives 3/4
  CHECK(reversed_minmax_value(UncertaintySet({complete(4), Graph(4, {{0, 1}})})) ==
        doctest::Approx(0.75).epsilon(1e-14));

  SUBCASE("nonincreasing when the adversary gains options") {
    Rng rng(16);
    std::vector<Graph> members{random_graph(8, 0.8, rng)};
    double prev = reversed_minmax_value(UncertaintySet(members));
    for (int k = 0; k < 4; ++k) {
      members.push_back(random_graph(8, 0.6, rng));
      const double cur = reversed_minmax_value(UncertaintySet(members));
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}
