#include "symclu/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace symclu {

SimplexWeights project_simplex(const Eigen::VectorXd& y) {
  if (y.size() < 1) {
    throw std::invalid_argument("project_simplex: empty input");
  }
  if (!y.allFinite()) {
    throw std::invalid_argument("project_simplex: non-finite input");
  }
  const int k = static_cast<int>(y.size());
  std::vector<double> u(y.data(), y.data() + k);
  std::sort(u.begin(), u.end(), std::greater<double>());

  double cumsum = 0.0;
  double theta = u[0] - 1.0;  // overwritten on the first pass
  for (int i = 0; i < k; ++i) {
    cumsum += u[i];
    const double t = (1.0 - cumsum) / (i + 1);
    if (u[i] + t > 0.0) theta = t;
  }
  return SimplexWeights((y.array() + theta).max(0.0).matrix());
}

double wp_objective(const WpSubproblem& prob, const Eigen::VectorXd& w,
                    const Eigen::VectorXd& p) {
  return 0.5 * prob.mu * (w.squaredNorm() + p.squaredNorm()) +
         prob.c.dot(prob.beta * p - w) + prob.eta * w.dot(p);
}

WpSolution solve_wp(const WpSubproblem& prob, const SimplexWeights& w0,
                    const SimplexWeights& p0) {
  if (!(prob.mu > prob.eta)) {
    throw std::invalid_argument(
        "solve_wp: mu must exceed eta (strong convexity)");
  }
  if (!(prob.mu > 0.0) || prob.eta < 0.0 || prob.beta < 0.0) {
    throw std::invalid_argument("solve_wp: invalid weights");
  }
  if (!prob.c.allFinite()) {
    throw std::invalid_argument("solve_wp: non-finite scores");
  }
  const int k = static_cast<int>(prob.c.size());
  if (w0.size() != k || p0.size() != k) {
    throw std::invalid_argument("solve_wp: dimension mismatch");
  }

  Eigen::VectorXd w = w0.coeffs();
  Eigen::VectorXd p = p0.coeffs();

  WpSolution sol;
  sol.objective_trace.push_back(wp_objective(prob, w, p));
  for (int t = 1; t <= prob.t_max; ++t) {
    const Eigen::VectorXd w_new =
        project_simplex((prob.c - prob.eta * p) / prob.mu).coeffs();
    const Eigen::VectorXd p_new =
        project_simplex(-(prob.eta * w_new + prob.beta * prob.c) / prob.mu)
            .coeffs();
    const double moved = (w_new - w).norm() + (p_new - p).norm();
    w = w_new;
    p = p_new;
    sol.rounds = t;
    sol.objective_trace.push_back(wp_objective(prob, w, p));
    if (moved <= 1e-12) break;
  }

  sol.w = SimplexWeights(w);
  sol.p = SimplexWeights(p);
  sol.coupled = w.dot(p) <= 1e-12;
  return sol;
}

}  // namespace symclu
