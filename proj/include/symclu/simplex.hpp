#pragma once

#include <Eigen/Dense>

#include <vector>

#include "symclu/types.hpp"

namespace symclu {

/// Exact Euclidean projection onto {w >= 0, sum w = 1}.
/// Sort-and-threshold scheme, O(K log K).
SimplexWeights project_simplex(const Eigen::VectorXd& y);

/// Quadratic subproblem over two simplex vectors with a bilinear coupling
/// penalty:
///   min  mu/2 (|w|^2 + |p|^2) + sum_k c_k (beta p_k - w_k) + eta w'p
///   s.t. w, p on the simplex
/// The penalty eta w'p relaxes the hard disjointness constraint w'p = 0;
/// mu > eta keeps the problem strongly convex with a unique optimum.
struct WpSubproblem {
  Eigen::VectorXd c;  // slice scores c_k = <A(k), VV'>
  double mu = 0.1;    // density weight, > 0
  double beta = 10.0; // dissimilarity weight, >= 0
  double eta = 0.099; // coupling penalty, >= 0, < mu
  int t_max = 20;     // alternation cap
};

struct WpSolution {
  SimplexWeights w;
  SimplexWeights p;
  bool coupled = false;  // w'p <= 1e-12 held at the returned point
  int rounds = 0;
  std::vector<double> objective_trace;  // value before and after each round
};

double wp_objective(const WpSubproblem& prob, const Eigen::VectorXd& w,
                    const Eigen::VectorXd& p);

/// Alternates the two exact simplex-projection updates until the iterates
/// stop moving (|dw| + |dp| <= 1e-12) or t_max rounds elapse. The coupled
/// flag reports whether the relaxation recovered a disjoint (w, p), i.e.
/// whether the solution is also optimal for the hard-constrained problem.
WpSolution solve_wp(const WpSubproblem& prob, const SimplexWeights& w0,
                    const SimplexWeights& p0);

}  // namespace symclu
