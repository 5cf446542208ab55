#include "cclique/simplex.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace cclique {

namespace {

constexpr double kOptTol = 1e-9;     // reduced-cost optimality
constexpr double kPivotTol = 1e-10;  // minimum absolute pivot magnitude
constexpr double kFeasTol = 1e-9;      // phase-1 acceptance
constexpr double kRefreshSlack = 1e-7;  // tolerated refactorization noise in b
// Entries below this fraction of their row are semantically zero: every
// decision in this kernel carries >= 1e-9 tolerances, while elimination and
// refactorization noise lives exactly in that band and must never pivot.
constexpr double kSnapRel = 1e-9;
constexpr double kDegenTol = 1e-12;     // step counted as degenerate below this
constexpr int kStallLimit = 50;      // degenerate pivots before Bland's rule
constexpr int kMaxReverify = 16;     // optimality re-checks per phase

bool finite(double x) { return std::isfinite(x); }

void validate(const LinearProgram& lp) {
  const int n = lp.num_vars();
  auto check_block = [&](const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const char* what) {
    if (a.rows() != b.size())
      throw std::invalid_argument(std::string("solve_lp: ") + what + " row mismatch");
    if (a.rows() > 0 && a.cols() != n)
      throw std::invalid_argument(std::string("solve_lp: ") + what + " column mismatch");
    if (!a.allFinite() || !b.allFinite())
      throw std::invalid_argument(std::string("solve_lp: ") + what + " has non-finite entries");
  };
  check_block(lp.A_le, lp.b_le, "A_le");
  check_block(lp.A_eq, lp.b_eq, "A_eq");
  if (!lp.c.allFinite()) throw std::invalid_argument("solve_lp: non-finite objective");
  if (lp.lo.size() != n || lp.hi.size() != n)
    throw std::invalid_argument("solve_lp: bound size mismatch");
  for (int j = 0; j < n; ++j)
    if (std::isnan(lp.lo[j]) || std::isnan(lp.hi[j]))
      throw std::invalid_argument("solve_lp: NaN bound");
}

// One transformed column: contributes sign * u to original variable `var`.
struct Column {
  int var;
  double sign;
};

struct Standardized {
  Eigen::MatrixXd a;         // rows x (structural + slack), row-equilibrated
  Eigen::VectorXd b;         // nonnegative after row negation
  std::vector<bool> is_eq;   // per row
  Eigen::VectorXd c;         // structural costs (transformed)
  std::vector<Column> cols;  // structural column descriptors
  Eigen::VectorXd offsets;   // per original variable
  std::vector<int> init_basis;
  int n_struct = 0;
  int n_slack = 0;
  int n_art = 0;
  bool bound_infeasible = false;
  bool trivially_infeasible = false;
};

// Shift/flip/split variables to u >= 0, append finite upper bounds as rows,
// add slacks and artificials, and equilibrate rows. Columns stay unscaled:
// rescaling them would rescale the variables, and the absolute reduced-cost
// tolerance is only sound while the polytope keeps variables O(1).
Standardized standardize(const LinearProgram& lp) {
  const int n = lp.num_vars();
  const double inf = std::numeric_limits<double>::infinity();
  Standardized s;
  s.offsets = Eigen::VectorXd::Zero(n);

  std::vector<double> upper;  // per structural column: finite residual bound or inf
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lo[j], hi = lp.hi[j];
    if (lo > hi) {
      s.bound_infeasible = true;
      return s;
    }
    if (finite(lo)) {
      s.cols.push_back({j, 1.0});
      s.offsets[j] = lo;
      upper.push_back(finite(hi) ? hi - lo : inf);
    } else if (finite(hi)) {
      s.cols.push_back({j, -1.0});
      s.offsets[j] = hi;
      upper.push_back(inf);
    } else {
      s.cols.push_back({j, 1.0});
      upper.push_back(inf);
      s.cols.push_back({j, -1.0});
      upper.push_back(inf);
    }
  }
  s.n_struct = static_cast<int>(s.cols.size());

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  std::vector<bool> eq_flag;
  auto push_row = [&](const Eigen::VectorXd& orig, double b, bool is_eq) {
    Eigen::VectorXd r(s.n_struct);
    for (int k = 0; k < s.n_struct; ++k) r[k] = orig[s.cols[k].var] * s.cols[k].sign;
    double shift = 0.0;
    for (int j = 0; j < n; ++j) shift += orig[j] * s.offsets[j];
    const double b_shifted = b - shift;
    const double amax = r.cwiseAbs().maxCoeff();
    if (amax == 0.0) {
      if ((is_eq && std::abs(b_shifted) > kFeasTol) || (!is_eq && b_shifted < -kFeasTol))
        s.trivially_infeasible = true;
      return;  // vacuous row
    }
    rows.push_back(std::move(r));
    rhs.push_back(b_shifted);
    eq_flag.push_back(is_eq);
  };
  for (int i = 0; i < lp.A_eq.rows(); ++i) push_row(lp.A_eq.row(i), lp.b_eq[i], true);
  for (int i = 0; i < lp.A_le.rows(); ++i) push_row(lp.A_le.row(i), lp.b_le[i], false);
  for (int k = 0; k < s.n_struct; ++k) {
    if (finite(upper[k])) {
      Eigen::VectorXd r = Eigen::VectorXd::Zero(s.n_struct);
      r[k] = 1.0;
      rows.push_back(std::move(r));
      rhs.push_back(upper[k]);
      eq_flag.push_back(false);
    }
  }

  const int m = static_cast<int>(rows.size());
  s.is_eq = eq_flag;
  for (bool e : eq_flag)
    if (!e) ++s.n_slack;

  s.a.setZero(m, s.n_struct + s.n_slack);
  s.b.resize(m);
  int slack_at = s.n_struct;
  for (int i = 0; i < m; ++i) {
    s.a.row(i).head(s.n_struct) = rows[static_cast<std::size_t>(i)];
    s.b[i] = rhs[static_cast<std::size_t>(i)];
    if (!eq_flag[static_cast<std::size_t>(i)]) s.a(i, slack_at++) = 1.0;
  }

  s.c = Eigen::VectorXd::Zero(s.n_struct);
  for (int k = 0; k < s.n_struct; ++k) s.c[k] = lp.c[s.cols[k].var] * s.cols[k].sign;

  for (int i = 0; i < m; ++i) {
    const double amax = s.a.row(i).head(s.n_struct).cwiseAbs().maxCoeff();
    if (amax > 0.0 && (amax > 16.0 || amax < 1.0 / 16.0)) {
      s.a.row(i) /= amax;
      s.b[i] /= amax;
    }
  }
  for (int i = 0; i < m; ++i) {
    if (s.b[i] < 0.0) {
      s.a.row(i) = -s.a.row(i);
      s.b[i] = -s.b[i];
    }
  }

  // A slack with +1 in its row can start basic; other rows get artificials.
  s.init_basis.assign(static_cast<std::size_t>(m), -1);
  std::vector<int> art_row;
  {
    int slack_i = 0;
    for (int i = 0; i < m; ++i) {
      if (!s.is_eq[static_cast<std::size_t>(i)]) {
        const int col = s.n_struct + slack_i++;
        if (s.a(i, col) > 0.5) {
          s.init_basis[static_cast<std::size_t>(i)] = col;
          continue;
        }
      }
      art_row.push_back(i);
    }
  }
  s.n_art = static_cast<int>(art_row.size());
  Eigen::MatrixXd with_art(m, s.n_struct + s.n_slack + s.n_art);
  with_art.leftCols(s.n_struct + s.n_slack) = s.a;
  with_art.rightCols(s.n_art).setZero();
  for (int k = 0; k < s.n_art; ++k) {
    const int r = art_row[static_cast<std::size_t>(k)];
    with_art(r, s.n_struct + s.n_slack + k) = 1.0;
    s.init_basis[static_cast<std::size_t>(r)] = s.n_struct + s.n_slack + k;
  }
  s.a = std::move(with_art);
  return s;
}

enum class RunOutcome { optimal, unbounded, unverified };

// Full-tableau primal simplex over a fixed original system, templated on the
// working scalar. Accumulated elimination error is wiped by refactorizing
// against pristine data; optimality is accepted only when a freshly rebuilt
// tableau confirms it.
template <class T>
class Engine {
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

 public:
  // refresh_every: pivots between periodic refactorizations (0 = only at
  // optimality/unboundedness claims). bland_always trades speed for the
  // most conservative pivot path.
  Engine(const Standardized& s, int refresh_every, bool bland_always = false)
      : orig_a_(s.a.template cast<T>()),
        orig_b_(s.b.template cast<T>()),
        basis_(s.init_basis),
        refresh_every_(refresh_every),
        bland_always_(bland_always) {
    work_a_ = orig_a_;
    work_b_ = orig_b_;
  }

  int rows() const { return static_cast<int>(orig_a_.rows()); }
  int cols() const { return static_cast<int>(orig_a_.cols()); }
  int iterations() const { return iterations_; }
  const std::vector<int>& basis() const { return basis_; }
  double objective() const { return static_cast<double>(z_); }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(cols());
    for (int i = 0; i < rows(); ++i) {
      const int j = basis_[static_cast<std::size_t>(i)];
      if (j >= 0) u[j] = std::max(static_cast<double>(work_b_[i]), 0.0);
    }
    return u;
  }

  RunOutcome run(const Eigen::VectorXd& costs, int ncols_active) {
    costs_ = costs.template cast<T>();
    refresh();
    const long max_iter = 5000 + 100L * (rows() + cols());
    int stall = 0;
    int reverify = 0;
    int since_refresh = 0;
    bool bland = bland_always_;
    for (;;) {
      if (iterations_ > max_iter) return RunOutcome::unverified;
      const int enter = pick_entering(ncols_active, bland);
      if (enter < 0) {
        // Accept optimality only off a freshly rebuilt tableau whose basis
        // is sanely conditioned and primal feasible.
        if (since_refresh == 0) return healthy() ? RunOutcome::optimal : RunOutcome::unverified;
        if (reverify >= kMaxReverify) return RunOutcome::unverified;
        refresh();
        since_refresh = 0;
        ++reverify;
        continue;
      }
      const int leave = pick_leaving(enter, bland);
      if (leave < 0) {
        if (since_refresh > 0) {  // do not trust unboundedness from a stale tableau
          refresh();
          since_refresh = 0;
          continue;
        }
        return healthy() ? RunOutcome::unbounded : RunOutcome::unverified;
      }
      const T step = work_b_[leave] / work_a_(leave, enter);
      if (step < static_cast<T>(kDegenTol))
        bland = bland || ++stall >= kStallLimit;
      else
        stall = 0;
      pivot(leave, enter);
      ++iterations_;
      ++since_refresh;
      if (refresh_every_ > 0 && since_refresh >= refresh_every_) {
        refresh();
        since_refresh = 0;
      }
    }
  }

  void pivot(int row, int col) {
    const T p = work_a_(row, col);
    work_a_.row(row) /= p;
    work_b_[row] /= p;
    for (int i = 0; i < rows(); ++i) {
      if (i == row) continue;
      const T f = work_a_(i, col);
      if (f != T(0)) {
        work_a_.row(i) -= f * work_a_.row(row);
        work_b_[i] -= f * work_b_[row];
        if (work_b_[i] < T(0) && work_b_[i] > -static_cast<T>(kFeasTol)) work_b_[i] = T(0);
        snap_row(i);
      }
    }
    const T cj = cost_row_[col];
    if (cj != T(0)) {
      cost_row_ -= cj * work_a_.row(row).transpose();
      z_ += cj * work_b_[row];
    }
    cost_row_[col] = T(0);
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // Drive basic artificials out of the basis wherever a usable structural
  // pivot exists; dependent rows keep theirs pinned at zero.
  void drive_out_artificials(int base_cols) {
    for (int i = 0; i < rows(); ++i) {
      const int bj = basis_[static_cast<std::size_t>(i)];
      if (bj < base_cols) continue;
      int pick = -1;
      T pick_mag = static_cast<T>(kPivotTol);
      for (int j = 0; j < base_cols; ++j) {
        const T mag = std::abs(work_a_(i, j));
        if (mag > pick_mag) {
          pick_mag = mag;
          pick = j;
        }
      }
      if (pick >= 0) pivot(i, pick);
    }
  }

 private:
  // Noise entries that later pivot or join a ratio test wreck the basis.
  void snap_row(int i) {
    const T snap = static_cast<T>(kSnapRel) * work_a_.row(i).cwiseAbs().maxCoeff();
    for (int j = 0; j < cols(); ++j)
      if (work_a_(i, j) != T(0) && std::abs(work_a_(i, j)) < snap) work_a_(i, j) = T(0);
  }

  void refresh() {
    const int m = rows();
    if (m == 0) {
      cost_row_ = costs_;
      z_ = T(0);
      basis_ok_ = true;
      return;
    }
    Mat basis_mat(m, m);
    for (int i = 0; i < m; ++i)
      basis_mat.col(i) = orig_a_.col(basis_[static_cast<std::size_t>(i)]);
    Eigen::PartialPivLU<Mat> lu(basis_mat);
    work_a_ = lu.solve(orig_a_);
    work_b_ = lu.solve(orig_b_);
    if (!work_a_.allFinite() || !work_b_.allFinite())
      throw std::runtime_error("solve_lp: singular basis (internal)");
    for (int i = 0; i < m; ++i) snap_row(i);
    for (int i = 0; i < m; ++i)
      if (work_b_[i] < T(0) && work_b_[i] > -static_cast<T>(kRefreshSlack)) work_b_[i] = T(0);

    // A blown-up condition proxy or a refreshed negative basic means the
    // pivot path degenerated; results off this basis cannot be trusted.
    const auto diag = lu.matrixLU().diagonal().cwiseAbs();
    const T diag_max = diag.maxCoeff();
    const T diag_min = diag.minCoeff();
    basis_ok_ = diag_min > T(0) && diag_max / diag_min < T(1e13) && work_b_.minCoeff() >= T(0);
    if (!basis_ok_ && std::getenv("CCLIQUE_LP_DEBUG"))
      std::fprintf(stderr, "refresh unhealthy: diag_ratio=%Lg min_b=%Lg\n",
                   static_cast<long double>(diag_min > T(0) ? diag_max / diag_min : T(-1)),
                   static_cast<long double>(work_b_.minCoeff()));

    cost_row_ = costs_;
    z_ = T(0);
    for (int i = 0; i < m; ++i) {
      const T cb = costs_[basis_[static_cast<std::size_t>(i)]];
      if (cb != T(0)) {
        cost_row_ -= cb * work_a_.row(i).transpose();
        z_ += cb * work_b_[i];
      }
    }
    for (int i = 0; i < m; ++i) cost_row_[basis_[static_cast<std::size_t>(i)]] = T(0);
  }

  bool healthy() const { return basis_ok_; }

  int pick_entering(int ncols_active, bool bland) const {
    if (bland) {
      for (int j = 0; j < ncols_active; ++j)
        if (cost_row_[j] < -static_cast<T>(kOptTol)) return j;
      return -1;
    }
    int best = -1;
    T best_cost = -static_cast<T>(kOptTol);
    for (int j = 0; j < ncols_active; ++j) {
      if (cost_row_[j] < best_cost) {
        best_cost = cost_row_[j];
        best = j;
      }
    }
    return best;
  }

  // Harris-style two-pass ratio test: the minimum ratio over every eligible
  // row keeps the basis primal feasible; among the tied rows the largest
  // pivot element wins (best conditioning), except under Bland's rule where
  // the smallest basis index preserves the anti-cycling guarantee.
  int pick_leaving(int col, bool bland) const {
    T theta = T(0);
    bool found = false;
    for (int i = 0; i < rows(); ++i) {
      const T aij = work_a_(i, col);
      if (aij <= static_cast<T>(kPivotTol)) continue;
      const T ratio = work_b_[i] / aij;
      if (!found || ratio < theta) {
        theta = ratio;
        found = true;
      }
    }
    if (!found) return -1;

    const T tie = static_cast<T>(kDegenTol) * (T(1) + theta);
    int best = -1;
    T best_pivot = T(0);
    for (int i = 0; i < rows(); ++i) {
      const T aij = work_a_(i, col);
      if (aij <= static_cast<T>(kPivotTol)) continue;
      if (work_b_[i] / aij > theta + tie) continue;
      if (best < 0) {
        best = i;
        best_pivot = aij;
        continue;
      }
      if (bland) {
        if (basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(best)]) {
          best = i;
          best_pivot = aij;
        }
      } else if (aij > best_pivot) {
        best = i;
        best_pivot = aij;
      }
    }
    return best;
  }

  Mat orig_a_;
  Vec orig_b_;
  Mat work_a_;
  Vec work_b_;
  Vec costs_;
  Vec cost_row_;
  std::vector<int> basis_;
  T z_ = T(0);
  int iterations_ = 0;
  int refresh_every_ = 0;
  bool bland_always_ = false;
  bool basis_ok_ = true;
};

enum class SolveStatus { optimal, infeasible, unbounded, unverified };

struct EngineResult {
  SolveStatus status = SolveStatus::unverified;
  Eigen::VectorXd u;
  int iterations = 0;
};

template <class T>
EngineResult drive(const Standardized& s, int refresh_every, bool bland_always = false) {
  EngineResult res;
  Engine<T> engine(s, refresh_every, bland_always);
  const int base_cols = s.n_struct + s.n_slack;

  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(base_cols + s.n_art);
  c1.tail(s.n_art).setOnes();
  const RunOutcome p1 = engine.run(c1, base_cols + s.n_art);
  res.iterations = engine.iterations();
  if (p1 == RunOutcome::unverified) return res;
  if (p1 == RunOutcome::unbounded)
    throw std::runtime_error("solve_lp: phase 1 unbounded (internal)");
  if (std::max(engine.objective(), 0.0) > kFeasTol) {
    res.status = SolveStatus::infeasible;
    return res;
  }
  engine.drive_out_artificials(base_cols);

  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(base_cols + s.n_art);
  c2.head(s.n_struct) = s.c;
  const RunOutcome p2 = engine.run(c2, base_cols);
  res.iterations = engine.iterations();
  if (p2 == RunOutcome::unverified) return res;
  if (p2 == RunOutcome::unbounded) {
    res.status = SolveStatus::unbounded;
    return res;
  }
  res.status = SolveStatus::optimal;
  res.u = engine.solution();
  return res;
}

Eigen::VectorXd recover(const Standardized& s, const Eigen::VectorXd& u, int nvars) {
  Eigen::VectorXd v = s.offsets;
  for (int k = 0; k < s.n_struct; ++k) v[s.cols[k].var] += s.cols[k].sign * u[k];
  return v;
}

// Row-relative residual of v against the original program.
double residual(const LinearProgram& lp, const Eigen::VectorXd& v) {
  double worst = 0.0;
  for (int i = 0; i < lp.A_le.rows(); ++i) {
    const double scale = std::max(1.0, lp.A_le.row(i).cwiseAbs().maxCoeff());
    worst = std::max(worst, (lp.A_le.row(i).dot(v) - lp.b_le[i]) / scale);
  }
  for (int i = 0; i < lp.A_eq.rows(); ++i) {
    const double scale = std::max(1.0, lp.A_eq.row(i).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(lp.A_eq.row(i).dot(v) - lp.b_eq[i]) / scale);
  }
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (finite(lp.lo[j])) worst = std::max(worst, lp.lo[j] - v[j]);
    if (finite(lp.hi[j])) worst = std::max(worst, v[j] - lp.hi[j]);
  }
  return worst;
}

// Fast path in double; conditioning casualties rerun in long double with
// frequent refactorization, and as a last resort under Bland's rule from
// the start (most conservative pivot path). Optimal solutions must also
// pass a residual check against the untouched input.
EngineResult drive_adaptive(const LinearProgram& lp, const Standardized& s) {
  try {
    const EngineResult fast = drive<double>(s, 0);
    if (fast.status == SolveStatus::optimal &&
        residual(lp, recover(s, fast.u, lp.num_vars())) <= 1e-7)
      return fast;
    if (fast.status == SolveStatus::infeasible || fast.status == SolveStatus::unbounded)
      return fast;
  } catch (const std::runtime_error&) {
    // fall through to the hardened engine
  }
  try {
    const EngineResult hard = drive<long double>(s, 25);
    if (hard.status == SolveStatus::optimal &&
        residual(lp, recover(s, hard.u, lp.num_vars())) <= 1e-6)
      return hard;
    if (hard.status == SolveStatus::infeasible || hard.status == SolveStatus::unbounded)
      return hard;
  } catch (const std::runtime_error&) {
    // fall through to the conservative engine
  }
  EngineResult safe = drive<long double>(s, 5, true);
  if (safe.status == SolveStatus::unverified)
    throw std::runtime_error("solve_lp: failed to verify optimality (internal)");
  if (safe.status == SolveStatus::optimal &&
      residual(lp, recover(s, safe.u, lp.num_vars())) > 1e-6)
    throw std::runtime_error("solve_lp: solution fails residual check (internal)");
  return safe;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  validate(lp);
  LpSolution sol;
  Standardized s = standardize(lp);
  if (s.bound_infeasible || s.trivially_infeasible) {
    sol.status = LpStatus::infeasible;
    return sol;
  }

  const EngineResult res = drive_adaptive(lp, s);
  sol.iterations = res.iterations;
  if (res.status == SolveStatus::infeasible) {
    sol.status = LpStatus::infeasible;
    return sol;
  }
  if (res.status == SolveStatus::unbounded) {
    sol.status = LpStatus::unbounded;
    return sol;
  }

  sol.v = recover(s, res.u, lp.num_vars());
  sol.objective = lp.c.dot(sol.v);
  sol.status = LpStatus::optimal;
  return sol;
}

bool check_feasible(const LinearProgram& lp) {
  validate(lp);
  Standardized s = standardize(lp);
  if (s.bound_infeasible || s.trivially_infeasible) return false;
  return drive_adaptive(lp, s).status != SolveStatus::infeasible;
}

}  // namespace cclique
