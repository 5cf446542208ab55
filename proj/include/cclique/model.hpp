#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cclique/graph.hpp"
#include "cclique/uncertainty.hpp"

namespace cclique {

// Scalars of the penalized objective over the lifted polytope
// { x in simplex, eps*y <= x <= y, 0 <= y <= 1 }.
struct ModelParams {
  int n = 0;
  double eps = 0.0;
  double beta = 0.0;
  double gamma = 1.0;

  // Threshold above which the penalty is exact for the clique
  // correspondence; callers must pick beta strictly larger.
  static double beta_lower_bound(int n, double gamma, double eps) {
    if (n < 2) throw std::invalid_argument("beta_lower_bound: needs n >= 2");
    if (!(gamma > 0.0) || !(eps > 0.0)) throw std::invalid_argument("beta_lower_bound: gamma, eps > 0");
    return (1.0 - 1.0 / (2.0 * (n - 1)) + n / (2.0 * gamma)) / (2.0 * eps * eps);
  }

  static ModelParams defaults(int n, double gamma = 1.0) {
    ModelParams p;
    p.n = n;
    p.gamma = gamma;
    p.eps = std::min(n < 1000 ? 1e-3 : 1e-4, 1.0 / n);
    p.beta = n >= 2
                 ? std::nextafter(beta_lower_bound(n, gamma, p.eps) * (1.0 + 1e-6),
                                  std::numeric_limits<double>::infinity())
                 : 1.0;
    return p;
  }

  void validate() const {
    if (n < 1) throw std::invalid_argument("ModelParams: n >= 1");
    if (!(eps > 0.0 && eps <= 1.0 / n)) throw std::invalid_argument("ModelParams: eps in (0, 1/n]");
    if (!(beta > 0.0)) throw std::invalid_argument("ModelParams: beta > 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("ModelParams: gamma > 0");
  }
};

struct FeasiblePoint {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

struct FeasibilityReport {
  bool feasible = false;
  double worst_violation = 0.0;
};

inline FeasibilityReport feasible_check(const FeasiblePoint& pt, const ModelParams& params,
                                        double tol) {
  if (pt.x.size() != params.n || pt.y.size() != params.n)
    throw std::invalid_argument("feasible_check: dimension mismatch");
  // Sequential sum: construction sites compensate the simplex remainder in
  // index order, and Eigen's vectorized sum would reorder it.
  double total = 0.0;
  for (int i = 0; i < params.n; ++i) total += pt.x[i];
  double worst = std::abs(total - 1.0);
  for (int i = 0; i < params.n; ++i) {
    worst = std::max(worst, -pt.x[i]);
    worst = std::max(worst, params.eps * pt.y[i] - pt.x[i]);
    worst = std::max(worst, pt.x[i] - pt.y[i]);
    worst = std::max(worst, -pt.y[i]);
    worst = std::max(worst, pt.y[i] - 1.0);
  }
  worst = std::max(worst, 0.0);
  return {worst <= tol, worst};
}

// sum over edges of x_i x_j, each unordered pair once
template <class D>
double edge_pair_sum(const Graph& g, const Eigen::MatrixBase<D>& x) {
  double s = 0.0;
  for (const auto& [i, j] : g.edges()) s += x[i] * x[j];
  return s;
}

// sum over non-adjacent unordered pairs of x_i x_j, restricted to the
// support of x
template <class D>
double nonedge_pair_sum(const Graph& g, const Eigen::MatrixBase<D>& x) {
  std::vector<int> support;
  support.reserve(x.size());
  for (int i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) support.push_back(i);
  double s = 0.0;
  for (std::size_t a = 0; a < support.size(); ++a)
    for (std::size_t b = a + 1; b < support.size(); ++b)
      if (!g.has_edge(support[a], support[b])) s += x[support[a]] * x[support[b]];
  return s;
}

// Component value g_U(x,y) = -x'Ux + beta * x'(Ebar-U)x - |y|^2/(2 gamma).
// The penalty is summed structurally over non-adjacent pairs so it vanishes
// exactly (not just to roundoff) whenever supp(x) is a clique of the member;
// with beta of order 1e7 an algebraic rearrangement would lose ~1e-9 to
// cancellation.
template <class DX, class DY>
double g_value(const Graph& g, const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y,
               const ModelParams& params) {
  const double xux = 0.5 * x.squaredNorm() + 2.0 * edge_pair_sum(g, x);
  const double penalty = 2.0 * nonedge_pair_sum(g, x);
  return -xux + params.beta * penalty - y.squaredNorm() / (2.0 * params.gamma);
}

inline double g_value(const Graph& g, const FeasiblePoint& pt, const ModelParams& params) {
  return g_value(g, pt.x, pt.y, params);
}

// Same on an explicit regularized matrix (diagonal 1/2, binary off-diagonal).
inline double g_value(const Eigen::MatrixXd& u, const FeasiblePoint& pt,
                      const ModelParams& params) {
  const int n = static_cast<int>(u.rows());
  if (pt.x.size() != n || pt.y.size() != n)
    throw std::invalid_argument("g_value: dimension mismatch");
  double qe = 0.0, qn = 0.0;
  for (int i = 0; i < n; ++i) {
    if (pt.x[i] == 0.0) continue;
    for (int j = i + 1; j < n; ++j) {
      if (pt.x[j] == 0.0) continue;
      const double w = u(i, j);
      const double prod = pt.x[i] * pt.x[j];
      qe += w * prod;
      qn += (1.0 - w) * prod;
    }
  }
  const double xux = 0.5 * pt.x.squaredNorm() + 2.0 * qe;
  return -xux + params.beta * 2.0 * qn - pt.y.squaredNorm() / (2.0 * params.gamma);
}

// (U x)_i = x_i/2 + sum of x over neighbours of i
template <class D>
Eigen::VectorXd regularized_product(const Graph& g, const Eigen::MatrixBase<D>& x) {
  Eigen::VectorXd ux = 0.5 * x;
  for (int i = 0; i < g.vertex_count(); ++i) {
    double s = 0.0;
    for (int j : g.neighbors(i)) s += x[j];
    ux[i] += s;
  }
  return ux;
}

// grad_x g_U = beta (2e - x) - 2(1+beta) U x   (valid on the simplex)
template <class D>
Eigen::VectorXd g_gradient_x(const Graph& g, const Eigen::MatrixBase<D>& x,
                             const ModelParams& params) {
  Eigen::VectorXd grad =
      params.beta * (2.0 - x.array()).matrix() - 2.0 * (1.0 + params.beta) * regularized_product(g, x);
  return grad;
}

inline Eigen::VectorXd g_gradient_x(const Eigen::MatrixXd& u, const FeasiblePoint& pt,
                                    const ModelParams& params) {
  return params.beta * (2.0 - pt.x.array()).matrix() - 2.0 * (1.0 + params.beta) * (u * pt.x);
}

// Full gradient (grad_x, grad_y) as a stacked 2n-vector; grad_y = -y/gamma.
inline Eigen::VectorXd g_gradient(const Graph& g, const FeasiblePoint& pt,
                                  const ModelParams& params) {
  Eigen::VectorXd grad(2 * params.n);
  grad.head(params.n) = g_gradient_x(g, pt.x, params);
  grad.tail(params.n) = -pt.y / params.gamma;
  return grad;
}

inline Eigen::VectorXd g_gradient(const Eigen::MatrixXd& u, const FeasiblePoint& pt,
                                  const ModelParams& params) {
  Eigen::VectorXd grad(2 * static_cast<int>(u.rows()));
  grad.head(u.rows()) = g_gradient_x(u, pt, params);
  grad.tail(u.rows()) = -pt.y / params.gamma;
  return grad;
}

inline Eigen::VectorXd component_values(const UncertaintySet& us, const FeasiblePoint& pt,
                                        const ModelParams& params) {
  Eigen::VectorXd values(us.member_count());
  for (int k = 0; k < us.member_count(); ++k) values[k] = g_value(us.member(k), pt, params);
  return values;
}

struct ValueAndActive {
  double value = 0.0;
  std::vector<int> argmax;
};

inline std::vector<int> indices_within(const Eigen::VectorXd& values, double top, double tol) {
  std::vector<int> out;
  for (int k = 0; k < values.size(); ++k)
    if (values[k] >= top - tol) out.push_back(k);
  return out;
}

inline ValueAndActive G_value(const UncertaintySet& us, const FeasiblePoint& pt,
                              const ModelParams& params, double tol_active) {
  const Eigen::VectorXd values = component_values(us, pt, params);
  const double top = values.maxCoeff();
  return {top, indices_within(values, top, tol_active)};
}

// Certified upper bound on the Lipschitz constant of G over the polytope:
// max over members of sqrt(|2(-(1+beta)U + beta*Ebar)|_F^2 + n/gamma^2),
// using |x| <= 1 and |y| <= sqrt(n). The Frobenius norm has a closed form
// from the edge count: diagonal entries are -1, edge entries -2, non-edge
// entries 2*beta.
inline double lipschitz_upper_bound(const UncertaintySet& us, const ModelParams& params) {
  const int n = us.vertex_count();
  const double pairs = 0.5 * n * (n - 1);
  double worst_sq = 0.0;
  for (const auto& g : us.members()) {
    const double e = g.edge_count();
    const double frob_sq = n + 8.0 * e + 8.0 * params.beta * params.beta * (pairs - e);
    worst_sq = std::max(worst_sq, frob_sq);
  }
  return std::sqrt(worst_sq + n / (params.gamma * params.gamma));
}

// Uniform mass on C with indicator y. The last support coordinate absorbs
// the rounding remainder so the coordinates sum to exactly 1.
inline FeasiblePoint characteristic_point(const std::vector<int>& clique, int n, double eps) {
  if (clique.empty()) throw std::invalid_argument("characteristic_point: empty vertex set");
  if (!(eps > 0.0 && eps <= 1.0 / n))
    throw std::invalid_argument("characteristic_point: eps in (0, 1/n]");
  std::vector<int> c = clique;
  std::sort(c.begin(), c.end());
  if (c.front() < 0 || c.back() >= n)
    throw std::invalid_argument("characteristic_point: vertex out of range");
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i] == c[i - 1]) throw std::invalid_argument("characteristic_point: duplicate vertex");

  FeasiblePoint pt{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  const double q = 1.0 / static_cast<double>(c.size());
  double partial = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    pt.x[c[i]] = q;
    partial += q;
  }
  pt.x[c.back()] = 1.0 - partial;
  for (int v : c) pt.y[v] = 1.0;
  return pt;
}

// Objective value on the face of a common clique of the given size:
// 1/(2c) - 1 - c/(2 gamma); strictly decreasing in c.
inline double clique_face_value(int clique_size, double gamma) {
  if (clique_size < 1) throw std::invalid_argument("clique_face_value: size >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("clique_face_value: gamma > 0");
  const double c = clique_size;
  return 1.0 / (2.0 * c) - 1.0 - c / (2.0 * gamma);
}

// G >= -1 - n/(2 gamma) everywhere on the polytope; stands in for the
// unknown optimum in the rate bounds.
inline double surrogate_lower_bound(const ModelParams& params) {
  return -1.0 - params.n / (2.0 * params.gamma);
}

}  // namespace cclique
