#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

namespace symclu {

/// Row-per-sample data with optional integer class ids.
struct DataMatrix {
  Eigen::MatrixXd values;                 // n x m, rows are samples
  std::optional<Eigen::VectorXi> labels;  // length n when present

  int n() const { return static_cast<int>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }

  /// Throws std::invalid_argument on n < 2, non-finite entries,
  /// or a label vector of the wrong length.
  void validate() const;
};

/// Nonnegative coefficient vector summing to one. Used both for the
/// similarity weights w and the dissimilarity weights p.
class SimplexWeights {
 public:
  static constexpr double kSumTolerance = 1e-12;

  /// Trivial one-dimensional simplex {1}.
  SimplexWeights() : coeffs_(Eigen::VectorXd::Ones(1)) {}

  /// Validates nonnegativity and unit sum (within kSumTolerance).
  explicit SimplexWeights(Eigen::VectorXd coeffs);

  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  int size() const { return static_cast<int>(coeffs_.size()); }
  double operator[](int k) const { return coeffs_[k]; }

 private:
  Eigen::VectorXd coeffs_;
};

/// Per-sample cluster labels plus provenance for the harness.
struct ClusterAssignment {
  Eigen::VectorXi labels;  // values in [0, r)
  std::uint64_t seed = 0;
  std::uint64_t config_fingerprint = 0;
};

/// FNV-1a over a byte string; used for stable config fingerprints.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace symclu
