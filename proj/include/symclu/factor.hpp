#pragma once

#include <Eigen/Dense>

#include <functional>

#include "symclu/graph.hpp"

namespace symclu {

/// Moore-Penrose pseudo-inverse via thin SVD. Singular values below
/// 1e-10 * sigma_max are treated as zero, so rank-deficient input is
/// truncated rather than rejected. An n x 0 input yields a 0 x n result.
Eigen::MatrixXd reduced_pinv(const Eigen::MatrixXd& w);

/// Fixed complement of one factor column: the remaining columns and their
/// pseudo-inverse. Immutable once built; any update to another column
/// invalidates it, so contexts are rebuilt per column within a sweep.
struct ColumnContext {
  Eigen::MatrixXd basis;  // n x (r-1), columns other than j
  Eigen::MatrixXd pinv;   // (r-1) x n
  bool gram_ready = false;
};

ColumnContext make_column_context(const Eigen::MatrixXd& v, int j);

/// Squared distance from v to the range of ctx.basis:
/// v'(I - B B^+)v, arranged so the n x n projector is never formed.
/// Result lies in [0, |v|^2]; tiny negative round-off is clamped to zero.
double orth_reg(const Eigen::VectorXd& v, const ColumnContext& ctx);

/// Implicit product with M = S - beta D + alpha (I - B B^+) - B B',
/// computed as (S - beta D)v + alpha v - B[(alpha B^+ + B')v] in
/// O(n^2 + n r) without materializing M.
Eigen::VectorXd m_times_v(const Eigen::VectorXd& v, const SparseGraph& s,
                          const SparseGraph& d, const ColumnContext& ctx,
                          double alpha, double beta);

using MvOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct RankOneStep {
  Eigen::VectorXd v;
  double d_norm = 0.0;  // |max(Mv/|v|^2, 0) - v| * |v|^2 at the input point
};

/// One monotone step of the rank-one subproblem min_{v>=0} -v'Mv + (v'v)^2/2.
/// The projected fixed-point candidate max(Mv/|v|^2, 0) is accepted through
/// backtracking t in {1, 1/2, ..., 2^-20}; if no step decreases the
/// surrogate the input is kept. A vanished column (|v| < 1e-12) is restarted
/// from the candidate max(M 1/sqrt(n), 0) when that decreases the surrogate,
/// and otherwise reported stationary with d_norm = 0.
RankOneStep rank_one_update(const Eigen::VectorXd& v, const MvOperator& mv);

}  // namespace symclu
