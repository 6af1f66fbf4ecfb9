#include "symclu/factor.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace symclu {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr double kMinColumnNorm = 1e-12;
constexpr int kMaxHalvings = 20;

// Surrogate of the rank-one objective, constant term dropped. The quadratic
// form symmetrizes an asymmetric M automatically.
double surrogate(const Eigen::VectorXd& v, const Eigen::VectorXd& mv) {
  const double vsq = v.squaredNorm();
  return -v.dot(mv) + 0.5 * vsq * vsq;
}

// Backtracks from v toward candidate along the segment; Mv is linear so the
// product at v + t(candidate - v) is interpolated from the two endpoints.
bool backtrack(const Eigen::VectorXd& v, const Eigen::VectorXd& mv_v,
               const Eigen::VectorXd& candidate,
               const Eigen::VectorXd& mv_candidate, Eigen::VectorXd* out) {
  const double g0 = surrogate(v, mv_v);
  double t = 1.0;
  for (int h = 0; h <= kMaxHalvings; ++h, t *= 0.5) {
    const Eigen::VectorXd vt = v + t * (candidate - v);
    const Eigen::VectorXd mvt = mv_v + t * (mv_candidate - mv_v);
    if (surrogate(vt, mvt) < g0) {
      *out = vt;
      return true;
    }
  }
  return false;
}

}  // namespace

Eigen::MatrixXd reduced_pinv(const Eigen::MatrixXd& w) {
  const int q = static_cast<int>(w.cols());
  const int n = static_cast<int>(w.rows());
  if (q > n) {
    throw std::invalid_argument("reduced_pinv: more columns than rows");
  }
  if (q == 0) return Eigen::MatrixXd(0, n);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double tau = kRankTolerance * sigma[0];
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > tau && sigma[i] > 0.0) inv[i] = 1.0 / sigma[i];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

ColumnContext make_column_context(const Eigen::MatrixXd& v, int j) {
  const int n = static_cast<int>(v.rows());
  const int r = static_cast<int>(v.cols());
  if (j < 0 || j >= r) {
    throw std::invalid_argument("make_column_context: column out of range");
  }
  ColumnContext ctx;
  ctx.basis.resize(n, r - 1);
  int m = 0;
  for (int t = 0; t < r; ++t) {
    if (t != j) ctx.basis.col(m++) = v.col(t);
  }
  ctx.pinv = reduced_pinv(ctx.basis);
  ctx.gram_ready = true;
  return ctx;
}

double orth_reg(const Eigen::VectorXd& v, const ColumnContext& ctx) {
  if (!ctx.gram_ready) {
    throw std::logic_error("orth_reg: context not ready");
  }
  double r = v.squaredNorm();
  if (ctx.basis.cols() > 0) {
    r -= (ctx.basis.transpose() * v).dot(ctx.pinv * v);
  }
  assert(r >= -1e-10);  // projector residue only
  return std::max(r, 0.0);
}

Eigen::VectorXd m_times_v(const Eigen::VectorXd& v, const SparseGraph& s,
                          const SparseGraph& d, const ColumnContext& ctx,
                          double alpha, double beta) {
  Eigen::VectorXd out = s * v;
  if (beta != 0.0 && d.nonZeros() > 0) out -= beta * (d * v);
  if (alpha != 0.0) out += alpha * v;
  if (ctx.basis.cols() > 0) {
    Eigen::VectorXd t = ctx.basis.transpose() * v;
    if (alpha != 0.0) t += alpha * (ctx.pinv * v);
    out.noalias() -= ctx.basis * t;
  }
  return out;
}

RankOneStep rank_one_update(const Eigen::VectorXd& v, const MvOperator& mv) {
  const int n = static_cast<int>(v.size());
  const double vsq = v.squaredNorm();

  if (std::sqrt(vsq) < kMinColumnNorm) {
    // vanished column: zero is KKT-stationary, but a restart may still help
    const Eigen::VectorXd ones =
        Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
    const Eigen::VectorXd candidate = mv(ones).cwiseMax(0.0);
    RankOneStep step{v, 0.0};
    if (candidate.squaredNorm() > 0.0) {
      const Eigen::VectorXd mv_v = mv(v);
      const Eigen::VectorXd mv_candidate = mv(candidate);
      Eigen::VectorXd accepted;
      if (backtrack(v, mv_v, candidate, mv_candidate, &accepted)) {
        step.v = accepted;
      }
    }
    return step;
  }

  const Eigen::VectorXd mv_v = mv(v);
  const Eigen::VectorXd candidate = (mv_v / vsq).cwiseMax(0.0);
  RankOneStep step{v, (candidate - v).norm() * vsq};
  if (step.d_norm == 0.0) return step;  // exact fixed point

  const Eigen::VectorXd mv_candidate = mv(candidate);
  Eigen::VectorXd accepted;
  if (backtrack(v, mv_v, candidate, mv_candidate, &accepted)) {
    step.v = accepted;
  }
  return step;
}

}  // namespace symclu
