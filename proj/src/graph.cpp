#include "symclu/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace symclu {

namespace {

Eigen::MatrixXd pairwise_sq_dist(const Eigen::MatrixXd& x) {
  const Eigen::VectorXd sq = x.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = sq.replicate(1, x.rows()) +
                       sq.transpose().replicate(x.rows(), 1) -
                       2.0 * (x * x.transpose());
  return d2.cwiseMax(0.0);  // guard tiny negative round-off
}

}  // namespace

Eigen::MatrixXd self_tuning_kernel(const DataMatrix& data, int scale_rank) {
  data.validate();
  const int n = data.n();
  if (scale_rank < 1) {
    throw std::invalid_argument("self_tuning_kernel: scale_rank must be >= 1");
  }
  if (n < scale_rank + 1) {
    throw std::invalid_argument(
        "self_tuning_kernel: need at least scale_rank + 1 samples");
  }

  const Eigen::MatrixXd d2 = pairwise_sq_dist(data.values);

  // sigma_i: distance to the scale_rank-th nearest other sample
  Eigen::VectorXd sigma(n);
  std::vector<double> row(n - 1);
  for (int i = 0; i < n; ++i) {
    int m = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) row[m++] = d2(i, j);
    }
    std::nth_element(row.begin(), row.begin() + (scale_rank - 1), row.end());
    sigma[i] = std::sqrt(row[scale_rank - 1]);
  }

  double min_positive = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (sigma[i] > 0.0) min_positive = std::min(min_positive, sigma[i]);
  }
  if (!std::isfinite(min_positive)) {
    throw std::runtime_error("degenerate dataset");
  }
  for (int i = 0; i < n; ++i) {
    if (sigma[i] == 0.0) sigma[i] = min_positive;
  }

  Eigen::MatrixXd kernel(n, n);
  for (int i = 0; i < n; ++i) {
    kernel(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const double v = std::exp(-d2(i, j) / (sigma[i] * sigma[j]));
      kernel(i, j) = v;
      kernel(j, i) = v;
    }
  }
  return kernel;
}

Eigen::MatrixXd gaussian_kernel(const DataMatrix& data, double sigma) {
  data.validate();
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("gaussian_kernel: sigma must be positive");
  }
  const Eigen::MatrixXd d2 = pairwise_sq_dist(data.values);
  Eigen::MatrixXd kernel = (-d2 / (sigma * sigma)).array().exp();
  kernel.diagonal().setOnes();
  return kernel;
}

SparseGraph NeighborSlices::slice(int k) const {
  if (k < 0 || k >= count()) {
    throw std::invalid_argument("NeighborSlices::slice: index out of range");
  }
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(n);
  for (int i = 0; i < n; ++i) {
    trips.emplace_back(i, cols[k][i], vals[k][i]);
  }
  SparseGraph a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

NeighborSlices build_slices(const Eigen::MatrixXd& kernel) {
  const int n = static_cast<int>(kernel.rows());
  if (kernel.cols() != n || n < 2) {
    throw std::invalid_argument("build_slices: kernel must be square, n >= 2");
  }
  constexpr double kTol = 1e-9;
  if (kernel.minCoeff() < -kTol) {
    throw std::invalid_argument("build_slices: kernel must be nonnegative");
  }
  if ((kernel - kernel.transpose()).cwiseAbs().maxCoeff() > kTol) {
    throw std::invalid_argument("build_slices: kernel must be symmetric");
  }
  if ((kernel.diagonal().array() - 1.0).abs().maxCoeff() > kTol) {
    throw std::invalid_argument("build_slices: kernel must have unit diagonal");
  }

  const int kk = n - 1;
  NeighborSlices slices;
  slices.n = n;
  slices.cols.assign(kk, std::vector<int>(n));
  slices.vals.assign(kk, std::vector<double>(n));
  slices.frob_norms.assign(kk, 0.0);

  // per row: neighbors by decreasing kernel value, ties to the smaller index
  std::vector<int> order(kk);
  for (int i = 0; i < n; ++i) {
    int m = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) order[m++] = j;
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (kernel(i, a) != kernel(i, b)) return kernel(i, a) > kernel(i, b);
      return a < b;
    });
    for (int k = 0; k < kk; ++k) {
      slices.cols[k][i] = order[k];
      slices.vals[k][i] = kernel(i, order[k]);
    }
  }

  for (int k = 0; k < kk; ++k) {
    double sq = 0.0;
    for (int i = 0; i < n; ++i) sq += slices.vals[k][i] * slices.vals[k][i];
    const double norm = std::sqrt(sq);
    if (norm == 0.0) throw std::runtime_error("degenerate kernel");
    slices.frob_norms[k] = norm;
    for (int i = 0; i < n; ++i) slices.vals[k][i] /= norm;
  }
  return slices;
}

SparseGraph combine(const NeighborSlices& slices,
                    const Eigen::VectorXd& weights) {
  if (weights.size() != slices.count()) {
    throw std::invalid_argument("combine: weight count mismatch");
  }
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < slices.count(); ++k) {
    const double wk = weights[k];
    if (wk == 0.0) continue;
    for (int i = 0; i < slices.n; ++i) {
      trips.emplace_back(i, slices.cols[k][i], wk * slices.vals[k][i]);
    }
  }
  SparseGraph s(slices.n, slices.n);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

Eigen::VectorXd correct_rate(const NeighborSlices& slices,
                             const Eigen::VectorXi& labels) {
  if (labels.size() != slices.n) {
    throw std::invalid_argument("correct_rate: label length mismatch");
  }
  Eigen::VectorXd rate(slices.count());
  for (int k = 0; k < slices.count(); ++k) {
    int hits = 0;
    for (int i = 0; i < slices.n; ++i) {
      if (labels[i] == labels[slices.cols[k][i]]) ++hits;
    }
    rate[k] = static_cast<double>(hits) / slices.n;
  }
  return rate;
}

}  // namespace symclu
