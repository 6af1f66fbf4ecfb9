#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

#include "symclu/types.hpp"

namespace symclu {

using SparseGraph = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Ordered k-th nearest neighbor slices of a kernel matrix.
///
/// Slice k (0-based) holds exactly one entry per row: the kernel value of
/// that row's (k+1)-th nearest neighbor, neighbors ordered by decreasing
/// kernel value with ties broken by smaller sample index. There are n-1
/// slices, their supports are pairwise disjoint, and each stored slice is
/// scaled to unit Frobenius norm; the original norms are kept so raw slices
/// can be reconstructed.
struct NeighborSlices {
  int n = 0;
  std::vector<std::vector<int>> cols;     // cols[k][i]: neighbor of sample i
  std::vector<std::vector<double>> vals;  // normalized kernel values
  std::vector<double> frob_norms;         // Frobenius norms before scaling

  int count() const { return static_cast<int>(cols.size()); }

  /// Materializes one slice as a sparse matrix (normalized values).
  SparseGraph slice(int k) const;
};

/// Self-tuning Gaussian kernel: kappa(x_i, x_j) = exp(-|x_i-x_j|^2 /
/// (sigma_i sigma_j)), where sigma_i is the distance from x_i to its
/// scale_rank-th nearest other sample. Zero local scales (duplicate-heavy
/// data) fall back to the smallest positive scale; if all scales are zero
/// the dataset is unusable and the call fails with "degenerate dataset".
Eigen::MatrixXd self_tuning_kernel(const DataMatrix& data, int scale_rank = 7);

/// Plain Gaussian kernel with one global bandwidth; config escape hatch.
Eigen::MatrixXd gaussian_kernel(const DataMatrix& data, double sigma);

/// Builds the ordered neighbor slices from a symmetric nonnegative kernel
/// with unit diagonal. A slice whose entries are all zero makes the
/// normalization impossible and fails with "degenerate kernel".
NeighborSlices build_slices(const Eigen::MatrixXd& kernel);

/// Weighted combination sum_k weights[k] * A(k). Accepts arbitrary real
/// weights (the simplex constraint lives in the callers); linear in weights.
SparseGraph combine(const NeighborSlices& slices,
                    const Eigen::VectorXd& weights);

/// Fraction of slice-k neighbor relations whose endpoints share a label.
Eigen::VectorXd correct_rate(const NeighborSlices& slices,
                             const Eigen::VectorXi& labels);

}  // namespace symclu
