#pragma once

#include <Eigen/Dense>

#include <vector>

namespace symclu {

/// Count matrix between predicted and true labels (rows: predicted classes,
/// columns: true classes, each in order of sorted distinct label value).
Eigen::MatrixXi contingency_table(const Eigen::VectorXi& pred,
                                  const Eigen::VectorXi& truth);

/// Maximum-weight one-to-one assignment on a nonnegative weight matrix
/// (padded square Hungarian, O(N^3)). Returns the matched column per row,
/// -1 where a row is matched to padding.
std::vector<int> assignment_max_weight(const Eigen::MatrixXd& weights);

/// Clustering accuracy: best one-to-one matching of predicted to true
/// classes, matched count over n.
double acc(const Eigen::VectorXi& pred, const Eigen::VectorXi& truth);

enum class NmiNorm { kGeometric, kMaxEntropy };

/// Normalized mutual information with natural logs. Default normalization is
/// by sqrt(H(pred) H(truth)); kMaxEntropy divides by max(H, H) instead for
/// comparability studies. If either entropy is zero the result is 1 when the
/// two set-partitions coincide and 0 otherwise.
double nmi(const Eigen::VectorXi& pred, const Eigen::VectorXi& truth,
           NmiNorm norm = NmiNorm::kGeometric);

}  // namespace symclu
