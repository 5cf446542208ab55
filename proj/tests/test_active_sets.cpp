#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "cclique/active_sets.hpp"

using namespace cclique;

namespace {

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

FeasiblePoint random_feasible(int n, double eps, Rng& rng) {
  Eigen::VectorXd x(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    x[i] = rng.next_exponential();
    total += x[i];
  }
  x /= total;
  double rest = 0.0;
  for (int i = 0; i + 1 < n; ++i) rest += x[i];
  x[n - 1] = 1.0 - rest;
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double hi = std::min(1.0, x[i] / eps);
    y[i] = x[i] + rng.next_double() * (hi - x[i]);
  }
  return {std::move(x), std::move(y)};
}

// Two-member toy on n = 2: member 0 has the edge, member 1 does not, so
// g_1 - g_0 = 2(1+beta) x_1 x_2 controls the activity gap directly.
struct Toy {
  UncertaintySet us{std::vector<Graph>{Graph(2, {{0, 1}}), Graph(2, {})}};
  ModelParams params;

  explicit Toy(double beta = 1.0) {
    params.n = 2;
    params.eps = 0.25;
    params.beta = beta;
    params.gamma = 1.0;
  }

  FeasiblePoint point(double x1) const {
    Eigen::Vector2d x{x1, 1.0 - x1};
    Eigen::Vector2d y{std::min(1.0, x[0] / params.eps), std::min(1.0, x[1] / params.eps)};
    return {x, y};
  }

  // y = x sits strictly inside the coupling band, leaving slack to move s.
  FeasiblePoint point_low_y(double x1) const {
    Eigen::Vector2d x{x1, 1.0 - x1};
    return {x, x};
  }
};

}  // namespace

TEST_CASE("exact_active") {
  Toy toy;
  SUBCASE("single member") {
    const UncertaintySet solo({Graph(2, {{0, 1}})});
    CHECK(exact_active(solo, toy.point(0.5), toy.params, 1e-10) == std::vector<int>{0});
  }
  SUBCASE("member with strictly smaller value is excluded") {
    // gap = 2(1+beta) x1 x2 = 2 at x = (1/2, 1/2); far above tol_active
    const auto active = exact_active(toy.us, toy.point(0.5), toy.params, 1e-10);
    CHECK(active == std::vector<int>{1});
  }
  SUBCASE("all members active on a common-clique face") {
    Rng rng(3);
    std::vector<Graph> members;
    for (int k = 0; k < 4; ++k) {
      auto g = random_graph(6, 0.4, rng);
      auto edges = g.edges();
      edges.emplace_back(1, 4);
      members.emplace_back(6, std::move(edges));
    }
    const UncertaintySet us(std::move(members));
    ModelParams p = ModelParams::defaults(6);
    const FeasiblePoint pt = characteristic_point({1, 4}, 6, p.eps);
    CHECK(exact_active(us, pt, p, 1e-10).size() == 4);
  }
}

TEST_CASE("delta_active") {
  Toy toy;
  const FeasiblePoint pt = toy.point(0.5);  // gap between members = 2
  SUBCASE("delta above the value range includes everything") {
    CHECK(delta_active(toy.us, pt, toy.params, 10.0) == std::vector<int>{0, 1});
  }
  SUBCASE("delta below the smallest positive gap recovers exact_active") {
    const Eigen::VectorXd values = component_values(toy.us, pt, toy.params);
    const double gap = values.maxCoeff() - values.minCoeff();
    CHECK(gap == doctest::Approx(2.0 * (1.0 + toy.params.beta) * 0.25));
    CHECK(delta_active(toy.us, pt, toy.params, gap * 0.5) ==
          exact_active(toy.us, pt, toy.params, 1e-10));
  }
  SUBCASE("exact is always contained") {
    Rng rng(9);
    const UncertaintySet us({random_graph(5, 0.5, rng), random_graph(5, 0.5, rng),
                             random_graph(5, 0.5, rng)});
    const ModelParams p = ModelParams::defaults(5);
    for (int t = 0; t < 50; ++t) {
      const FeasiblePoint pt2 = random_feasible(5, p.eps, rng);
      const double delta = 1e-3 + rng.next_double();
      CHECK(subset(exact_active(us, pt2, p, 1e-10), delta_active(us, pt2, p, delta)));
    }
  }
  CHECK_THROWS_AS(delta_active(toy.us, pt, toy.params, 0.0), std::invalid_argument);
}

TEST_CASE("eta_active basics") {
  Toy toy;
  const double l_hat = lipschitz_upper_bound(toy.us, toy.params);

  SUBCASE("eta beyond delta/(2L) violates the precondition") {
    CHECK_THROWS_AS(
        eta_active(toy.us, toy.point(0.4), toy.params, 0.1, 0.1 / l_hat, l_hat, 1e-10),
        std::invalid_argument);
  }
  SUBCASE("eta = 0 gives exactly the active set") {
    const FeasiblePoint pt = toy.point(0.37);
    const auto rep = eta_active(toy.us, pt, toy.params, 0.5, 0.0, l_hat, 1e-10);
    CHECK(rep.eta == exact_active(toy.us, pt, toy.params, 1e-10));
    CHECK(rep.lp_calls == 0);
  }
  SUBCASE("shortcut fires when every member is exactly active") {
    // On the 2-clique face both members agree (the face identity).
    const UncertaintySet both({Graph(2, {{0, 1}}), Graph(2, {{0, 1}})});
    ModelParams p = toy.params;
    const FeasiblePoint pt = characteristic_point({0, 1}, 2, p.eps);
    const double l2 = lipschitz_upper_bound(both, p);
    const auto rep = eta_active(both, pt, p, 0.5, 0.5 / (2.0 * l2), l2, 1e-10);
    CHECK(rep.skipped);
    CHECK(rep.lp_calls == 0);
    CHECK(rep.eta == std::vector<int>{0, 1});
  }
}

TEST_CASE("eta_active reachability on the toy pair") {
  Toy toy;
  const double l_hat = lipschitz_upper_bound(toy.us, toy.params);
  const double delta = 0.1;
  const double eta = delta / (2.0 * l_hat);

  SUBCASE("a nearly-active member within reach is included") {
    // With x1 = 5e-4 the activity gap 2(1+beta) x1 x2 ~ 2e-3 fits inside the
    // movement the box and coupling allow plus the L*eta^2 slack.
    const FeasiblePoint pt = toy.point_low_y(5e-4);
    const Eigen::VectorXd values = component_values(toy.us, pt, toy.params);
    REQUIRE(values[1] > values[0]);
    REQUIRE(values[1] - values[0] < delta);
    const auto rep = eta_active(toy.us, pt, toy.params, delta, eta, l_hat, 1e-10);
    CHECK(rep.eta == std::vector<int>{0, 1});
    CHECK(rep.lp_calls == 1);

    // Sampling oracle: some sampled (s,t) in the box satisfies the system,
    // certifying feasibility independently of the LP.
    const double r = eta / std::sqrt(2.0);
    const Eigen::VectorXd g0 = g_gradient_x(toy.us.member(0), pt.x, toy.params);
    const Eigen::VectorXd g1 = g_gradient_x(toy.us.member(1), pt.x, toy.params);
    Rng rng(123);
    bool witness = false;
    for (int t = 0; t < 10000 && !witness; ++t) {
      const double u = (2.0 * rng.next_double() - 1.0) * r;
      Eigen::Vector2d s{pt.x[0] + u, pt.x[1] - u};
      if (s.minCoeff() < 0.0) continue;
      Eigen::Vector2d tt;
      bool ok = true;
      for (int i = 0; i < 2 && ok; ++i) {
        const double lo = std::max({0.0, pt.y[i] - r, s[i]});
        const double hi = std::min({1.0, pt.y[i] + r, s[i] / toy.params.eps});
        ok = lo <= hi;
        if (ok) tt[i] = lo + rng.next_double() * (hi - lo);
      }
      if (!ok) continue;
      // candidate bar = 0; single other member u = 1
      const double lhs = (g1 - g0).dot(s - pt.x);
      const double rhs = values[0] - values[1] + l_hat * eta * eta;
      witness = lhs <= rhs;
    }
    CHECK(witness);
  }

  SUBCASE("a member out of reach is excluded") {
    const FeasiblePoint pt = toy.point(0.3);  // activity gap 0.84
    const double wide_delta = 1.0;
    const double eta2 = wide_delta / (2.0 * l_hat);
    const Eigen::VectorXd values = component_values(toy.us, pt, toy.params);
    REQUIRE(values[1] - values[0] < wide_delta);  // member 0 is delta-active
    // Interval certificate: the gradient-difference row cannot bridge the
    // gap inside the box, so the system is infeasible for member 0.
    const Eigen::VectorXd diff = g_gradient_x(toy.us.member(1), pt.x, toy.params) -
                                 g_gradient_x(toy.us.member(0), pt.x, toy.params);
    const double reach = diff.cwiseAbs().sum() * (eta2 / std::sqrt(2.0));
    REQUIRE(reach < (values[1] - values[0]) - l_hat * eta2 * eta2);
    const auto rep = eta_active(toy.us, pt, toy.params, wide_delta, eta2, l_hat, 1e-10);
    CHECK(rep.eta == std::vector<int>{1});
  }
}

TEST_CASE("nesting and eta-monotonicity on random probes") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_below(4));
    const int m = 2 + static_cast<int>(rng.next_below(4));
    std::vector<Graph> members;
    for (int k = 0; k < m; ++k) members.push_back(random_graph(n, 0.5, rng));
    const UncertaintySet us(std::move(members));
    ModelParams p = ModelParams::defaults(n);
    p.beta = 1.0 + 5.0 * rng.next_double();  // moderate beta keeps ties frequent
    const double l_hat = lipschitz_upper_bound(us, p);
    const FeasiblePoint pt = random_feasible(n, p.eps, rng);
    const double delta = 0.01 + rng.next_double();
    const double cap = delta / (2.0 * l_hat);

    std::vector<int> prev;
    for (double frac : {0.0, 0.25, 0.5, 1.0}) {
      const auto rep = eta_active(us, pt, p, delta, frac * cap, l_hat, 1e-10);
      CHECK(subset(rep.exact, rep.eta));
      CHECK(subset(rep.eta, rep.delta));
      if (!prev.empty() || frac > 0.0) CHECK(subset(prev, rep.eta));
      prev = rep.eta;
    }
  }
}

TEST_CASE("upper semicontinuity proxy on a converging sequence") {
  Toy toy;
  const double l_hat = lipschitz_upper_bound(toy.us, toy.params);
  const double delta = 0.1;
  const double eta = delta / (2.0 * l_hat);
  const double limit_x = 5e-4;

  const auto limit_rep =
      eta_active(toy.us, toy.point_low_y(limit_x), toy.params, delta, eta, l_hat, 1e-10);
  REQUIRE(limit_rep.eta.size() == 2);
  // indices recurring along the sequence must belong to the limit set
  std::vector<int> recurring{0, 1};
  for (int k = 1; k <= 6; ++k) {
    const auto rep = eta_active(toy.us, toy.point_low_y(limit_x + 2e-5 / k), toy.params, delta,
                                eta, l_hat, 1e-10);
    std::vector<int> keep;
    for (int idx : recurring)
      if (std::find(rep.eta.begin(), rep.eta.end(), idx) != rep.eta.end()) keep.push_back(idx);
    recurring = keep;
  }
  CHECK_FALSE(recurring.empty());
  CHECK(subset(recurring, limit_rep.eta));
}
