#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace cclique {

// Dense LP: minimize c'v subject to A_le v <= b_le, A_eq v = b_eq,
// lo <= v <= hi (entries of lo/hi may be -inf/+inf).
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd A_le;
  Eigen::VectorXd b_le;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  int num_vars() const { return static_cast<int>(c.size()); }

  static LinearProgram with_vars(int n) {
    LinearProgram lp;
    lp.c = Eigen::VectorXd::Zero(n);
    lp.lo = Eigen::VectorXd::Constant(n, 0.0);
    lp.hi = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    lp.A_le.resize(0, n);
    lp.b_le.resize(0);
    lp.A_eq.resize(0, n);
    lp.b_eq.resize(0);
    return lp;
  }
};

// Incremental row assembly; Eigen matrices are materialized once at build().
struct LpBuilder {
  explicit LpBuilder(int n) : nvars(n), lp(LinearProgram::with_vars(n)) {}

  void add_le(const Eigen::VectorXd& row, double rhs) {
    le_rows.push_back(row);
    le_rhs.push_back(rhs);
  }
  void add_eq(const Eigen::VectorXd& row, double rhs) {
    eq_rows.push_back(row);
    eq_rhs.push_back(rhs);
  }

  LinearProgram build() {
    lp.A_le.resize(static_cast<int>(le_rows.size()), nvars);
    lp.b_le.resize(static_cast<int>(le_rows.size()));
    for (std::size_t i = 0; i < le_rows.size(); ++i) {
      lp.A_le.row(static_cast<int>(i)) = le_rows[i];
      lp.b_le[static_cast<int>(i)] = le_rhs[i];
    }
    lp.A_eq.resize(static_cast<int>(eq_rows.size()), nvars);
    lp.b_eq.resize(static_cast<int>(eq_rows.size()));
    for (std::size_t i = 0; i < eq_rows.size(); ++i) {
      lp.A_eq.row(static_cast<int>(i)) = eq_rows[i];
      lp.b_eq[static_cast<int>(i)] = eq_rhs[i];
    }
    return lp;
  }

  int nvars;
  LinearProgram lp;
  std::vector<Eigen::VectorXd> le_rows, eq_rows;
  std::vector<double> le_rhs, eq_rhs;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd v;
  double objective = 0.0;
  int iterations = 0;
};

// Two-phase primal simplex on the slack-augmented standard form, with rows
// and columns equilibrated internally and Bland's rule engaged after a stall
// of degenerate pivots. Deterministic: fixed pivot rules, no randomness.
LpSolution solve_lp(const LinearProgram& lp);

// Phase-1 only; true iff the constraint system admits a point with phase-1
// objective <= 1e-9 (scaled residuals).
bool check_feasible(const LinearProgram& lp);

}  // namespace cclique
