#include "symclu/types.hpp"

#include <stdexcept>
#include <string>

namespace symclu {

void DataMatrix::validate() const {
  if (values.rows() < 2) {
    throw std::invalid_argument("DataMatrix: need at least 2 samples");
  }
  if (!values.allFinite()) {
    throw std::invalid_argument("DataMatrix: non-finite entries");
  }
  if (labels && labels->size() != values.rows()) {
    throw std::invalid_argument("DataMatrix: label length mismatch");
  }
}

SimplexWeights::SimplexWeights(Eigen::VectorXd coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 1) {
    throw std::invalid_argument("SimplexWeights: empty vector");
  }
  if (!coeffs_.allFinite() || coeffs_.minCoeff() < 0.0) {
    throw std::invalid_argument("SimplexWeights: negative or non-finite entry");
  }
  if (std::abs(coeffs_.sum() - 1.0) > kSumTolerance) {
    throw std::invalid_argument("SimplexWeights: coefficients must sum to 1");
  }
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace symclu
