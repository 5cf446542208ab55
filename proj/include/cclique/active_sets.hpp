#pragma once

#include <vector>

#include "cclique/model.hpp"
#include "cclique/simplex.hpp"
#include "cclique/uncertainty.hpp"

namespace cclique {

struct ActiveSetReport {
  std::vector<int> exact;
  std::vector<int> delta;
  std::vector<int> eta;
  bool skipped = false;  // all members exactly active: feasibility tests skipped
  int lp_calls = 0;
};

struct EtaActiveOptions {
  // System box radius: the written system uses eta/sqrt(n) in the inf-norm
  // over the concatenated 2n-vector, which lets the Euclidean distance reach
  // eta*sqrt(2). strict_ball shrinks it to eta/sqrt(2n) so the Euclidean
  // radius stays within eta. Default follows the written system.
  bool strict_ball = false;
};

// Members attaining the max within tol_active.
std::vector<int> exact_active(const UncertaintySet& us, const FeasiblePoint& pt,
                              const ModelParams& params, double tol_active);

// Members with g_U >= G - delta; a superset of exact_active for delta > 0.
std::vector<int> delta_active(const UncertaintySet& us, const FeasiblePoint& pt,
                              const ModelParams& params, double delta);

// Approximate local active set: each delta-active member is kept iff the
// linearized reachability system (gradient-difference rows with slack
// L_hat*eta^2, the inf-norm box, and the polytope) is feasible, decided by
// LP phase-1. Exactly active members are kept without an LP call, and when
// they already cover the whole family the test is skipped wholesale.
// Requires 0 <= eta <= delta/(2 L_hat).
ActiveSetReport eta_active(const UncertaintySet& us, const FeasiblePoint& pt,
                           const ModelParams& params, double delta, double eta, double l_hat,
                           double tol_active, const EtaActiveOptions& opts = {});

// Same with the component values already evaluated at pt (one G evaluation
// shared with the caller).
ActiveSetReport eta_active_with_values(const UncertaintySet& us, const FeasiblePoint& pt,
                                       const ModelParams& params, const Eigen::VectorXd& values,
                                       double delta, double eta, double l_hat, double tol_active,
                                       const EtaActiveOptions& opts = {});

}  // namespace cclique
