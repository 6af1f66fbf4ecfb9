#include "symclu/metrics.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace symclu {

namespace {

std::map<int, int> label_index(const Eigen::VectorXi& labels) {
  std::map<int, int> index;
  for (int i = 0; i < labels.size(); ++i) index.emplace(labels[i], 0);
  int next = 0;
  for (auto& [value, id] : index) id = next++;
  return index;
}

void check_pair(const Eigen::VectorXi& pred, const Eigen::VectorXi& truth) {
  if (pred.size() == 0) throw std::invalid_argument("metrics: empty input");
  if (pred.size() != truth.size()) {
    throw std::invalid_argument("metrics: length mismatch");
  }
}

// one nonzero per row and per column <=> identical set-partitions
bool identical_partitions(const Eigen::MatrixXi& table) {
  for (int i = 0; i < table.rows(); ++i) {
    if ((table.row(i).array() > 0).count() != 1) return false;
  }
  for (int j = 0; j < table.cols(); ++j) {
    if ((table.col(j).array() > 0).count() != 1) return false;
  }
  return true;
}

}  // namespace

Eigen::MatrixXi contingency_table(const Eigen::VectorXi& pred,
                                  const Eigen::VectorXi& truth) {
  check_pair(pred, truth);
  const auto pi = label_index(pred);
  const auto ti = label_index(truth);
  Eigen::MatrixXi table = Eigen::MatrixXi::Zero(
      static_cast<int>(pi.size()), static_cast<int>(ti.size()));
  for (int i = 0; i < pred.size(); ++i) {
    ++table(pi.at(pred[i]), ti.at(truth[i]));
  }
  return table;
}

std::vector<int> assignment_max_weight(const Eigen::MatrixXd& weights) {
  const int rows = static_cast<int>(weights.rows());
  const int cols = static_cast<int>(weights.cols());
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("assignment: empty weight matrix");
  }
  const int n = std::max(rows, cols);
  // minimize negated weights on the padded square matrix
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(n, n);
  cost.topLeftCorner(rows, cols) = -weights;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(rows, -1);
  for (int j = 1; j <= n; ++j) {
    const int i = match[j];
    if (i >= 1 && i <= rows && j <= cols) row_to_col[i - 1] = j - 1;
  }
  return row_to_col;
}

double acc(const Eigen::VectorXi& pred, const Eigen::VectorXi& truth) {
  check_pair(pred, truth);
  const Eigen::MatrixXi table = contingency_table(pred, truth);
  const std::vector<int> match = assignment_max_weight(table.cast<double>());
  long matched = 0;
  for (int i = 0; i < table.rows(); ++i) {
    if (match[i] >= 0) matched += table(i, match[i]);
  }
  return static_cast<double>(matched) / pred.size();
}

double nmi(const Eigen::VectorXi& pred, const Eigen::VectorXi& truth,
           NmiNorm norm) {
  check_pair(pred, truth);
  const Eigen::MatrixXi table = contingency_table(pred, truth);
  const double n = static_cast<double>(pred.size());

  const Eigen::VectorXd a = table.rowwise().sum().cast<double>();
  const Eigen::VectorXd b = table.colwise().sum().transpose().cast<double>();

  auto entropy = [&](const Eigen::VectorXd& counts) {
    double h = 0.0;
    for (int i = 0; i < counts.size(); ++i) {
      if (counts[i] > 0.0) {
        const double q = counts[i] / n;
        h -= q * std::log(q);
      }
    }
    return h;
  };
  const double h_pred = entropy(a);
  const double h_truth = entropy(b);
  if (h_pred == 0.0 || h_truth == 0.0) {
    return identical_partitions(table) ? 1.0 : 0.0;
  }

  double info = 0.0;
  for (int i = 0; i < table.rows(); ++i) {
    for (int j = 0; j < table.cols(); ++j) {
      if (table(i, j) > 0) {
        const double pij = table(i, j) / n;
        info += pij * std::log(pij * n * n / (a[i] * b[j]));
      }
    }
  }
  const double denom = norm == NmiNorm::kGeometric
                           ? std::sqrt(h_pred * h_truth)
                           : std::max(h_pred, h_truth);
  return info / denom;
}

}  // namespace symclu
