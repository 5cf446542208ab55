#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cclique/active_sets.hpp"
#include "cclique/model.hpp"
#include "cclique/rng.hpp"
#include "cclique/uncertainty.hpp"

namespace cclique {

enum class EtaMode { fixed, decaying };

struct SolverConfig {
  int k_max = 1000;
  double xi = 1e-3;       // stopping threshold on the LMO gap
  double omega = 0.8;     // Armijo backtracking factor
  double sigma = 0.4;     // Armijo slope
  double delta = 0.01;    // approximate-activity tolerance

  EtaMode eta_mode = EtaMode::decaying;
  double eta_fixed = 0.0;  // fixed mode: must lie in (0, delta/(2 L)]
  double eta0 = 0.0;       // decaying mode start; 0 selects delta/(2 L)
  double tau = 0.5;        // decay exponent, in (0, 1)

  double support_threshold = 0.0;  // 0 selects eps/2
  int armijo_cap = 200;            // trials before declaring step failure
  std::uint64_t seed = 0;
  int n_starts = 10;
  double tol_feas = 1e-9;
  double tol_active = 1e-10;
  bool greedy_extend = false;  // extend the support inside the backbone after the run
  bool strict_ball = false;    // see EtaActiveOptions

  void validate(double l_hat) const;
};

struct IterateRecord {
  int k = 0;
  double g_value = 0.0;
  double gap = 0.0;    // c_eta at this iterate
  double alpha = 0.0;  // accepted step; 0 when the run stopped here
  double eta = 0.0;
  int n_exact = 0;
  int n_delta = 0;
  int n_eta = 0;
  bool skipped = false;  // active-set shortcut fired
  int lp_calls = 0;      // system feasibility LPs at this iterate
  double feas_violation = 0.0;
  int armijo_backtracks = 0;
};

enum class Termination { gap_below_xi, k_max_reached, step_failure };

struct RunResult {
  FeasiblePoint point;
  std::vector<IterateRecord> trace;
  Termination termination = Termination::k_max_reached;
  std::vector<int> support;
  bool is_common_clique = false;
  bool is_maximal = false;
  int clique_size = 0;
  std::vector<std::string> warnings;
};

// Running check of the fixed-eta / decaying-eta rate bounds, built with the
// surrogate lower bound G >= -1 - n/(2 gamma) in place of the optimum. The
// two regimes are covered by taking the larger of the two expressions, which
// is exactly the regime the bound statement selects; a surrogate rho only
// enlarges both. bound(k) is valid once steps 0..k were all accepted.
class BoundTracker {
 public:
  BoundTracker(const SolverConfig& cfg, const ModelParams& params, double l_hat, double g0);

  void observe(double gap, double eta_k);  // one call per iterate, in order
  double c_star() const { return c_star_; }
  double bound(int k) const;
  double rho_hat() const { return rho_hat_; }
  double diameter_sq() const { return d_; }

 private:
  EtaMode mode_;
  double d_ = 0.0;  // diam^2 = n + 1
  double rho_hat_ = 0.0;
  double sigma_ = 0.0;
  double eta_fixed_ = 0.0;
  double c_star_ = std::numeric_limits<double>::infinity();
  std::vector<double> decay_sum_;  // prefix sums of (1+i)^-tau
  double tau_ = 0.5;
};

struct LmoResult {
  FeasiblePoint vertex;
  double gap = 0.0;
};

// Linear minimization oracle: minimize mu - (1/gamma) y_k'y over the
// polytope with mu >= grad_x g_U(z_k)'(x - x_k) for every supplied gradient;
// gap = -(optimum + |y_k|^2/gamma) = c_eta(z_k) >= 0. The returned vertex is
// cleaned to an exactly feasible point.
LmoResult lmo_step(const FeasiblePoint& pt, const std::vector<Eigen::VectorXd>& grads_x,
                   const ModelParams& params);

struct ArmijoResult {
  double alpha = 0.0;
  int backtracks = 0;
  FeasiblePoint next;
  double g_next = 0.0;
};

// First alpha = omega^m with G(z + alpha d) <= G(z) - sigma*alpha*gap;
// nullopt when armijo_cap trials fail.
std::optional<ArmijoResult> armijo_search(const UncertaintySet& us, const FeasiblePoint& pt,
                                          double g_current, const Eigen::VectorXd& direction,
                                          double gap, const SolverConfig& cfg,
                                          const ModelParams& params);

// eta_k: the fixed value, or eta0/(1+k)^tau clamped to (0, delta/(2 L)].
double eta_schedule(int k, const SolverConfig& cfg, double l_hat);

// x uniform on the simplex (exponential spacings), y = min(1, x/eps).
FeasiblePoint random_start(int n, double eps, Rng& rng);

std::vector<int> extract_support(const FeasiblePoint& pt, const ModelParams& params,
                                 const SolverConfig& cfg);

struct CliqueCheck {
  bool is_common = false;
  bool is_maximal = false;
};
CliqueCheck verify_common_clique(const std::vector<int>& s, const UncertaintySet& us);

RunResult run_fw(const UncertaintySet& us, const FeasiblePoint& start, const SolverConfig& cfg,
                 const ModelParams& params);

struct MultistartResult {
  std::vector<RunResult> runs;
  std::vector<bool> failed;
  std::vector<std::string> failure_reasons;
  std::vector<int> sizes;  // found clique size per successful run, run order
  int best_size = 0;       // largest verified-common clique across runs
  std::vector<int> best_clique;
  int max_size = 0;
  double mean_size = 0.0;
  double std_size = 0.0;  // population standard deviation
  bool all_common = true;
};

// n_starts seeded random starts; deterministic for a fixed seed regardless
// of the worker count. Per-run errors are flagged, not fatal.
MultistartResult multistart(const UncertaintySet& us, const SolverConfig& cfg,
                            const ModelParams& params, int workers = 1);

}  // namespace cclique
