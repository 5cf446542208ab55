#include "cclique/active_sets.hpp"

#include <cmath>
#include <stdexcept>

namespace cclique {

namespace {

std::vector<int> within(const Eigen::VectorXd& values, double slack) {
  std::vector<int> out;
  const double top = values.maxCoeff();
  for (int k = 0; k < values.size(); ++k)
    if (values[k] >= top - slack) out.push_back(k);
  return out;
}

}  // namespace

std::vector<int> exact_active(const UncertaintySet& us, const FeasiblePoint& pt,
                              const ModelParams& params, double tol_active) {
  return within(component_values(us, pt, params), tol_active);
}

std::vector<int> delta_active(const UncertaintySet& us, const FeasiblePoint& pt,
                              const ModelParams& params, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta_active: delta must be positive");
  return within(component_values(us, pt, params), delta);
}

ActiveSetReport eta_active_with_values(const UncertaintySet& us, const FeasiblePoint& pt,
                                       const ModelParams& params, const Eigen::VectorXd& values,
                                       double delta, double eta, double l_hat, double tol_active,
                                       const EtaActiveOptions& opts) {
  if (!(delta > 0.0)) throw std::invalid_argument("eta_active: delta must be positive");
  if (eta < 0.0 || eta > delta / (2.0 * l_hat))
    throw std::invalid_argument("eta_active: requires 0 <= eta <= delta/(2 L)");

  ActiveSetReport report;
  report.exact = within(values, tol_active);
  report.delta = within(values, delta);

  const int m = us.member_count();
  if (static_cast<int>(report.exact.size()) == m) {
    // All members already active: the local set can only be the whole family.
    report.eta = report.exact;
    report.skipped = true;
    return report;
  }
  if (eta == 0.0) {
    // Zero box radius pins (s,t) = (x,y); the system reduces to exact activity.
    report.eta = report.exact;
    return report;
  }

  const double radius = eta / std::sqrt(opts.strict_ball ? 2.0 * params.n : 1.0 * params.n);

  std::vector<Eigen::VectorXd> grads(report.delta.size());
  for (std::size_t a = 0; a < report.delta.size(); ++a)
    grads[a] = g_gradient_x(us.member(report.delta[a]), pt.x, params);

  std::vector<bool> is_exact(us.member_count(), false);
  for (int k : report.exact) is_exact[static_cast<std::size_t>(k)] = true;

  const double top = values.maxCoeff();
  const int top_member = report.exact.front();
  const auto top_it =
      std::find(report.delta.begin(), report.delta.end(), top_member);
  const std::size_t top_idx = static_cast<std::size_t>(top_it - report.delta.begin());

  const double slack = l_hat * eta * eta;
  const int n = params.n;
  for (std::size_t bar_idx = 0; bar_idx < report.delta.size(); ++bar_idx) {
    const int bar = report.delta[bar_idx];
    if (is_exact[static_cast<std::size_t>(bar)]) {
      report.eta.push_back(bar);  // (s,t) = (x,y) certifies it, no LP needed
      continue;
    }

    // Feasibility is "phase-1 objective <= 1e-9 on the equilibrated rows".
    // Two bounds decide most candidates without an LP; only the gray zone
    // between them pays for one.
    const auto row_scale = [](double amax) {
      return amax > 16.0 || (amax > 0.0 && amax < 1.0 / 16.0) ? amax : 1.0;
    };

    // Sufficient: at (s,t) = (x,y) only gradient rows can be violated, and
    // their scaled violations bound the phase-1 optimum from above.
    double stay_sum = 0.0;
    for (std::size_t a = 0; a < report.delta.size(); ++a) {
      if (report.delta[a] == bar) continue;
      const double violation = values[report.delta[a]] - values[bar] - slack;
      if (violation <= 0.0) continue;
      stay_sum += violation / row_scale((grads[a] - grads[bar_idx]).cwiseAbs().maxCoeff());
    }
    if (stay_sum <= 1e-9) {
      report.eta.push_back(bar);
      continue;
    }

    // Necessary: the top member's row reads <diff, s - x> <= -gap + slack,
    // and |<diff, s - x>| <= |diff| * eta inside the box (the s-block
    // Euclidean radius is at most sqrt(n) * eta/sqrt(n)). If the shortfall
    // exceeds the LP's feasibility tolerance even after row scaling, the
    // system is infeasible.
    const double gap = top - values[bar];
    const Eigen::VectorXd top_diff = grads[top_idx] - grads[bar_idx];
    const double shortfall = gap - slack - top_diff.norm() * eta;
    if (shortfall > 0.0 &&
        shortfall / row_scale(top_diff.cwiseAbs().maxCoeff()) > 16.0 * 1e-9)
      continue;

    LpBuilder builder(2 * n);
    auto& lp = builder.lp;
    for (int i = 0; i < n; ++i) {
      lp.lo[i] = std::max(0.0, pt.x[i] - radius);
      lp.hi[i] = pt.x[i] + radius;
      lp.lo[n + i] = std::max(0.0, pt.y[i] - radius);
      lp.hi[n + i] = std::min(1.0, pt.y[i] + radius);
    }
    Eigen::VectorXd ones_x = Eigen::VectorXd::Zero(2 * n);
    ones_x.head(n).setOnes();
    builder.add_eq(ones_x, 1.0);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(2 * n);
      row[i] = -1.0;
      row[n + i] = params.eps;
      builder.add_le(row, 0.0);
      Eigen::VectorXd row2 = Eigen::VectorXd::Zero(2 * n);
      row2[i] = 1.0;
      row2[n + i] = -1.0;
      builder.add_le(row2, 0.0);
    }
    // Gradient-difference rows act on s only: the y-blocks of all member
    // gradients equal -y/gamma and cancel in the difference.
    for (std::size_t a = 0; a < report.delta.size(); ++a) {
      const int u = report.delta[a];
      if (u == bar) continue;
      const Eigen::VectorXd diff = grads[a] - grads[bar_idx];
      Eigen::VectorXd row = Eigen::VectorXd::Zero(2 * n);
      row.head(n) = diff;
      builder.add_le(row, values[bar] - values[u] + slack + diff.dot(pt.x));
    }

    ++report.lp_calls;
    if (check_feasible(builder.build())) report.eta.push_back(bar);
  }
  return report;
}

ActiveSetReport eta_active(const UncertaintySet& us, const FeasiblePoint& pt,
                           const ModelParams& params, double delta, double eta, double l_hat,
                           double tol_active, const EtaActiveOptions& opts) {
  return eta_active_with_values(us, pt, params, component_values(us, pt, params), delta, eta,
                                l_hat, tol_active, opts);
}

}  // namespace cclique
