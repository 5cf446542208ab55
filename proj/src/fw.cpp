#include "cclique/fw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cclique/parallel.hpp"
#include "cclique/simplex.hpp"

namespace cclique {

void SolverConfig::validate(double l_hat) const {
  if (k_max < 0) throw std::invalid_argument("SolverConfig: k_max >= 0");
  if (!(xi > 0.0)) throw std::invalid_argument("SolverConfig: xi > 0");
  if (!(omega > 0.0 && omega < 1.0)) throw std::invalid_argument("SolverConfig: omega in (0,1)");
  if (!(sigma > 0.0 && sigma < 0.5)) throw std::invalid_argument("SolverConfig: sigma in (0,1/2)");
  if (!(delta > 0.0)) throw std::invalid_argument("SolverConfig: delta > 0");
  if (armijo_cap < 1) throw std::invalid_argument("SolverConfig: armijo_cap >= 1");
  if (n_starts < 1) throw std::invalid_argument("SolverConfig: n_starts >= 1");
  const double cap = delta / (2.0 * l_hat);
  if (eta_mode == EtaMode::fixed) {
    if (!(eta_fixed > 0.0 && eta_fixed <= cap * (1.0 + 1e-12)))
      throw std::invalid_argument("SolverConfig: fixed eta must lie in (0, delta/(2L)]");
  } else {
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("SolverConfig: tau in (0,1)");
    if (eta0 < 0.0 || (eta0 > 0.0 && eta0 > cap * (1.0 + 1e-12)))
      throw std::invalid_argument("SolverConfig: eta0 must lie in (0, delta/(2L)]");
  }
}

BoundTracker::BoundTracker(const SolverConfig& cfg, const ModelParams& params, double l_hat,
                           double g0)
    : mode_(cfg.eta_mode), d_(params.n + 1.0), sigma_(cfg.sigma), tau_(cfg.tau) {
  const double drop = g0 - surrogate_lower_bound(params);
  if (mode_ == EtaMode::fixed) {
    eta_fixed_ = cfg.eta_fixed;
    rho_hat_ = d_ * drop / sigma_;
  } else {
    const double cap = cfg.delta / (2.0 * l_hat);
    const double eta0 = cfg.eta0 > 0.0 ? std::min(cfg.eta0, cap) : cap;
    rho_hat_ = d_ * drop / (sigma_ * eta0);
  }
}

void BoundTracker::observe(double gap, double eta_k) {
  c_star_ = std::min(c_star_, gap);
  if (mode_ == EtaMode::decaying) {
    const int k = static_cast<int>(decay_sum_.size());
    const double term = std::pow(1.0 + k, -tau_);
    decay_sum_.push_back(decay_sum_.empty() ? term : decay_sum_.back() + term);
  }
  (void)eta_k;
}

double BoundTracker::bound(int k) const {
  if (mode_ == EtaMode::fixed) {
    const double t = rho_hat_ / ((k + 1.0) * eta_fixed_);
    return std::max(t, std::sqrt(rho_hat_ / ((k + 1.0) * (1.0 - sigma_) * eta_fixed_)));
  }
  const double s = decay_sum_.at(static_cast<std::size_t>(k));
  const double t = rho_hat_ / s;
  return std::max(t, std::sqrt(rho_hat_ / ((1.0 - sigma_) * s)));
}

namespace {

// An LP vertex is only accurate to solver tolerance; snap it back onto the
// polytope so iterates stay feasible over long runs. The x remainder lands
// on the largest coordinate, making the simplex sum exact.
FeasiblePoint clean_vertex(Eigen::VectorXd x, Eigen::VectorXd y, const ModelParams& params) {
  const int n = params.n;
  for (int i = 0; i < n; ++i) x[i] = std::max(0.0, x[i]);
  const double total = x.sum();
  if (total > 0.0) x /= total;
  int top = 0;
  for (int i = 1; i < n; ++i)
    if (x[i] > x[top]) top = i;
  double rest = 0.0;
  for (int i = 0; i < n; ++i)
    if (i != top) rest += x[i];
  x[top] = 1.0 - rest;
  for (int i = 0; i < n; ++i) {
    if (x[i] <= 0.0) {
      x[i] = std::max(0.0, x[i]);
      y[i] = 0.0;
    } else {
      y[i] = std::clamp(y[i], x[i], std::min(1.0, x[i] / params.eps));
    }
  }
  return {std::move(x), std::move(y)};
}

}  // namespace

LmoResult lmo_step(const FeasiblePoint& pt, const std::vector<Eigen::VectorXd>& grads_x,
                   const ModelParams& params) {
  if (grads_x.empty()) throw std::invalid_argument("lmo_step: empty gradient set");
  const int n = params.n;
  const int mu = 2 * n;  // variable layout: x, y, mu'

  // Epigraph form relative to the first gradient: with
  // mu' = mu - a_0'(x - x_k) >= 0, the rows become gradient differences.
  // The member gradients share their on-support block near clique faces, so
  // the differences are single-scale rows while the raw rows would mix O(1)
  // and O(beta) entries, which the dense tableau cannot survive.
  const Eigen::VectorXd& ref = grads_x.front();

  LpBuilder builder(2 * n + 1);
  auto& lp = builder.lp;
  for (int i = 0; i < n; ++i) lp.hi[n + i] = 1.0;
  lp.c.head(n) = ref;  // + a_0'x; the -a_0'x_k constant is added back below
  lp.c.segment(n, n) = -pt.y / params.gamma;
  lp.c[mu] = 1.0;

  Eigen::VectorXd ones_x = Eigen::VectorXd::Zero(2 * n + 1);
  ones_x.head(n).setOnes();
  builder.add_eq(ones_x, 1.0);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(2 * n + 1);
    row[i] = -1.0;
    row[n + i] = params.eps;
    builder.add_le(row, 0.0);
    Eigen::VectorXd row2 = Eigen::VectorXd::Zero(2 * n + 1);
    row2[i] = 1.0;
    row2[n + i] = -1.0;
    builder.add_le(row2, 0.0);
  }
  for (std::size_t u = 1; u < grads_x.size(); ++u) {
    const Eigen::VectorXd diff = grads_x[u] - ref;
    Eigen::VectorXd row = Eigen::VectorXd::Zero(2 * n + 1);
    row.head(n) = diff;
    row[mu] = -1.0;
    builder.add_le(row, diff.dot(pt.x));
  }

  const LpSolution sol = solve_lp(builder.build());
  if (sol.status != LpStatus::optimal)
    throw std::runtime_error("lmo_step: LMO subproblem not optimal (internal)");

  // objective = mu' + a_0'x - y_k'y/gamma; restore the -a_0'x_k shift.
  const double objective = sol.objective - ref.dot(pt.x);
  const double gap_raw = -(objective + pt.y.squaredNorm() / params.gamma);
  // The measured gap inherits roundoff proportional to the gradient scale
  // (the objective differences beta-scale quantities); small negatives are
  // measurement noise around a stationary point and clamp to zero.
  const double accuracy = 1e-6 * (1.0 + std::abs(objective)) +
                          1e-12 * ref.cwiseAbs().maxCoeff() * params.n;
  if (gap_raw < -accuracy)
    throw std::runtime_error("lmo_step: negative gap " + std::to_string(gap_raw) +
                             " beyond solver accuracy " + std::to_string(accuracy) +
                             " (internal)");

  LmoResult res;
  res.vertex = clean_vertex(sol.v.head(n), sol.v.segment(n, n), params);
  res.gap = std::max(gap_raw, 0.0);
  return res;
}

std::optional<ArmijoResult> armijo_search(const UncertaintySet& us, const FeasiblePoint& pt,
                                          double g_current, const Eigen::VectorXd& direction,
                                          double gap, const SolverConfig& cfg,
                                          const ModelParams& params) {
  if (!(gap > 0.0)) throw std::invalid_argument("armijo_search: needs a positive gap");
  const int n = params.n;
  double alpha = 1.0;
  for (int m = 0; m < cfg.armijo_cap; ++m) {
    FeasiblePoint trial{pt.x + alpha * direction.head(n), pt.y + alpha * direction.tail(n)};
    const double g_trial = component_values(us, trial, params).maxCoeff();
    if (g_trial <= g_current - cfg.sigma * alpha * gap)
      return ArmijoResult{alpha, m, std::move(trial), g_trial};
    alpha *= cfg.omega;
  }
  return std::nullopt;
}

double eta_schedule(int k, const SolverConfig& cfg, double l_hat) {
  const double cap = cfg.delta / (2.0 * l_hat);
  if (cfg.eta_mode == EtaMode::fixed) return std::min(cfg.eta_fixed, cap);
  const double eta0 = cfg.eta0 > 0.0 ? std::min(cfg.eta0, cap) : cap;
  return std::min(eta0 / std::pow(1.0 + k, cfg.tau), cap);
}

FeasiblePoint random_start(int n, double eps, Rng& rng) {
  if (!(eps > 0.0 && eps <= 1.0 / n)) throw std::invalid_argument("random_start: eps in (0, 1/n]");
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
  for (int i = 0; i < n; ++i) y[i] = std::min(1.0, x[i] / eps);
  return {std::move(x), std::move(y)};
}

std::vector<int> extract_support(const FeasiblePoint& pt, const ModelParams& params,
                                 const SolverConfig& cfg) {
  const double thr = cfg.support_threshold > 0.0 ? cfg.support_threshold : params.eps / 2.0;
  std::vector<int> s;
  for (int i = 0; i < pt.x.size(); ++i)
    if (pt.x[i] >= thr) s.push_back(i);
  return s;
}

CliqueCheck verify_common_clique(const std::vector<int>& s, const UncertaintySet& us) {
  const Graph inter = intersection_graph(us);
  CliqueCheck check;
  check.is_common = true;
  for (std::size_t a = 0; a < s.size() && check.is_common; ++a)
    for (std::size_t b = a + 1; b < s.size() && check.is_common; ++b)
      check.is_common = inter.has_edge(s[a], s[b]);

  check.is_maximal = check.is_common;
  if (check.is_common) {
    std::vector<bool> in_s(inter.vertex_count(), false);
    for (int v : s) in_s[static_cast<std::size_t>(v)] = true;
    for (int v = 0; v < inter.vertex_count() && check.is_maximal; ++v) {
      if (in_s[static_cast<std::size_t>(v)]) continue;
      bool extends = true;
      for (int u : s)
        if (!inter.has_edge(u, v)) {
          extends = false;
          break;
        }
      if (extends) check.is_maximal = false;
    }
  }
  return check;
}

namespace {

std::vector<int> greedy_extend_support(std::vector<int> s, const Graph& inter) {
  std::vector<bool> in_s(inter.vertex_count(), false);
  for (int v : s) in_s[static_cast<std::size_t>(v)] = true;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int v = 0; v < inter.vertex_count(); ++v) {
      if (in_s[static_cast<std::size_t>(v)]) continue;
      bool fits = true;
      for (int u : s)
        if (!inter.has_edge(u, v)) {
          fits = false;
          break;
        }
      if (fits) {
        s.push_back(v);
        in_s[static_cast<std::size_t>(v)] = true;
        grew = true;
        break;
      }
    }
  }
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

RunResult run_fw(const UncertaintySet& us, const FeasiblePoint& start, const SolverConfig& cfg,
                 const ModelParams& params) {
  params.validate();
  const double l_hat = lipschitz_upper_bound(us, params);
  cfg.validate(l_hat);
  if (!feasible_check(start, params, cfg.tol_feas).feasible)
    throw std::invalid_argument("run_fw: infeasible start");

  RunResult result;
  if (params.n >= 2 &&
      params.beta <= ModelParams::beta_lower_bound(params.n, params.gamma, params.eps))
    result.warnings.push_back("beta is not above the exactness threshold; supports may not be cliques");

  FeasiblePoint z = start;
  const EtaActiveOptions active_opts{cfg.strict_ball};
  for (int k = 0;; ++k) {
    const Eigen::VectorXd values = component_values(us, z, params);
    const double g_k = values.maxCoeff();
    const double eta_k = eta_schedule(k, cfg, l_hat);
    const ActiveSetReport active = eta_active_with_values(us, z, params, values, cfg.delta, eta_k,
                                                          l_hat, cfg.tol_active, active_opts);

    std::vector<Eigen::VectorXd> grads;
    grads.reserve(active.eta.size());
    for (int u : active.eta) grads.push_back(g_gradient_x(us.member(u), z.x, params));
    const LmoResult lmo = lmo_step(z, grads, params);

    IterateRecord rec;
    rec.k = k;
    rec.g_value = g_k;
    rec.gap = lmo.gap;
    rec.eta = eta_k;
    rec.n_exact = static_cast<int>(active.exact.size());
    rec.n_delta = static_cast<int>(active.delta.size());
    rec.n_eta = static_cast<int>(active.eta.size());
    rec.skipped = active.skipped;
    rec.lp_calls = active.lp_calls;
    rec.feas_violation =
        feasible_check(z, params, std::numeric_limits<double>::infinity()).worst_violation;
    result.trace.push_back(rec);

    if (lmo.gap <= cfg.xi) {
      result.termination = Termination::gap_below_xi;
      break;
    }
    if (k >= cfg.k_max) {
      result.termination = Termination::k_max_reached;
      break;
    }

    Eigen::VectorXd direction(2 * params.n);
    direction.head(params.n) = lmo.vertex.x - z.x;
    direction.tail(params.n) = lmo.vertex.y - z.y;
    const auto step = armijo_search(us, z, g_k, direction, lmo.gap, cfg, params);
    if (!step) {
      result.termination = Termination::step_failure;
      result.warnings.push_back("Armijo line search exhausted " +
                                std::to_string(cfg.armijo_cap) + " trials at k=" +
                                std::to_string(k));
      break;
    }
    result.trace.back().alpha = step->alpha;
    result.trace.back().armijo_backtracks = step->backtracks;
    z = step->next;
  }

  result.point = std::move(z);
  result.support = extract_support(result.point, params, cfg);
  if (cfg.greedy_extend && !result.support.empty()) {
    const CliqueCheck pre = verify_common_clique(result.support, us);
    if (pre.is_common) result.support = greedy_extend_support(result.support, intersection_graph(us));
  }
  const CliqueCheck check = verify_common_clique(result.support, us);
  result.is_common_clique = check.is_common;
  result.is_maximal = check.is_maximal;
  result.clique_size = static_cast<int>(result.support.size());
  return result;
}

MultistartResult multistart(const UncertaintySet& us, const SolverConfig& cfg,
                            const ModelParams& params, int workers) {
  MultistartResult agg;
  const int n_runs = cfg.n_starts;
  agg.runs.resize(static_cast<std::size_t>(n_runs));
  agg.failed.assign(static_cast<std::size_t>(n_runs), false);
  agg.failure_reasons.assign(static_cast<std::size_t>(n_runs), {});

  parallel_for(n_runs, workers, [&](int i) {
    try {
      Rng rng(Rng::mix(cfg.seed, static_cast<std::uint64_t>(i) + 1));
      const FeasiblePoint start = random_start(params.n, params.eps, rng);
      agg.runs[static_cast<std::size_t>(i)] = run_fw(us, start, cfg, params);
    } catch (const std::exception& ex) {
      agg.failed[static_cast<std::size_t>(i)] = true;
      agg.failure_reasons[static_cast<std::size_t>(i)] = ex.what();
    }
  });

  double sum = 0.0, sum_sq = 0.0;
  int counted = 0;
  for (int i = 0; i < n_runs; ++i) {
    if (agg.failed[static_cast<std::size_t>(i)]) continue;
    const RunResult& run = agg.runs[static_cast<std::size_t>(i)];
    agg.sizes.push_back(run.clique_size);
    agg.max_size = std::max(agg.max_size, run.clique_size);
    if (!run.is_common_clique) agg.all_common = false;
    if (run.is_common_clique && run.clique_size > agg.best_size) {
      agg.best_size = run.clique_size;
      agg.best_clique = run.support;
    }
    sum += run.clique_size;
    sum_sq += static_cast<double>(run.clique_size) * run.clique_size;
    ++counted;
  }
  if (counted > 0) {
    agg.mean_size = sum / counted;
    const double var = std::max(0.0, sum_sq / counted - agg.mean_size * agg.mean_size);
    agg.std_size = std::sqrt(var);
  }
  return agg;
}

}  // namespace cclique
