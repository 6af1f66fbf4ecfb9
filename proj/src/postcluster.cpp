#include "symclu/postcluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "symclu/random.hpp"

namespace symclu {

double augmented_entry(double s, double d, double y) {
  return y >= d ? 1.0 - (1.0 - y + d) * (1.0 - s) : (1.0 + y - d) * s;
}

namespace {

void rescale_by_max(Eigen::MatrixXd* m) {
  const double mx = m->maxCoeff();
  if (mx > 0.0) *m /= mx;
}

}  // namespace

AugmentedAffinity augment(const SparseGraph& s, const SparseGraph& d,
                          const Eigen::MatrixXd& v) {
  const int n = static_cast<int>(v.rows());
  if (s.rows() != n || s.cols() != n || d.rows() != n || d.cols() != n) {
    throw std::invalid_argument("augment: shape mismatch");
  }
  Eigen::MatrixXd sm = Eigen::MatrixXd(s);
  Eigen::MatrixXd dm = Eigen::MatrixXd(d);
  Eigen::MatrixXd y = v * v.transpose();
  rescale_by_max(&sm);
  rescale_by_max(&dm);
  rescale_by_max(&y);

  Eigen::MatrixXd z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      z(i, j) = augmented_entry(sm(i, j), dm(i, j), y(i, j));
    }
  }
  z = 0.5 * (z + z.transpose()).eval();
  z.diagonal().setZero();
  z = z.cwiseMax(0.0).cwiseMin(1.0);
  return AugmentedAffinity{std::move(z)};
}

namespace {

Eigen::VectorXi assign_nearest(const Eigen::MatrixXd& points,
                               const Eigen::MatrixXd& centers) {
  const int n = static_cast<int>(points.rows());
  Eigen::VectorXi labels(n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double best_d = (points.row(i) - centers.row(0)).squaredNorm();
    for (int c = 1; c < centers.rows(); ++c) {
      const double dd = (points.row(i) - centers.row(c)).squaredNorm();
      if (dd < best_d) {
        best_d = dd;
        best = c;
      }
    }
    labels[i] = best;
  }
  return labels;
}

Eigen::MatrixXd seed_centers_pp(const Eigen::MatrixXd& points, int k,
                                Rng* rng) {
  const int n = static_cast<int>(points.rows());
  Eigen::MatrixXd centers(k, points.cols());
  centers.row(0) = points.row(rng->uniform_int(n));
  Eigen::VectorXd min_d2 =
      (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = min_d2.sum();
    int pick;
    if (total > 0.0) {
      // sample proportional to squared distance
      double target = rng->uniform() * total;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        target -= min_d2[i];
        if (target <= 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng->uniform_int(n);  // duplicate-only data
    }
    centers.row(c) = points.row(pick);
    min_d2 = min_d2.cwiseMin(
        (points.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

}  // namespace

KmeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    int restarts, int max_iter) {
  const int n = static_cast<int>(points.rows());
  if (k < 1 || k > n) {
    throw std::invalid_argument("kmeans: need 1 <= k <= n");
  }
  if (restarts < 1) {
    throw std::invalid_argument("kmeans: need at least one restart");
  }

  KmeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();

  for (int run = 0; run < restarts; ++run) {
    Rng rng(derive_seed(seed, run));
    Eigen::MatrixXd centers = seed_centers_pp(points, k, &rng);
    Eigen::VectorXi labels = assign_nearest(points, centers);

    for (int it = 0; it < max_iter; ++it) {
      // means of each cluster; empty clusters grab the worst-fit point
      Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
      Eigen::VectorXi counts = Eigen::VectorXi::Zero(k);
      for (int i = 0; i < n; ++i) {
        sums.row(labels[i]) += points.row(i);
        ++counts[labels[i]];
      }
      for (int c = 0; c < k; ++c) {
        if (counts[c] > 0) {
          centers.row(c) = sums.row(c) / counts[c];
        } else {
          int worst = 0;
          double worst_d = -1.0;
          for (int i = 0; i < n; ++i) {
            const double dd =
                (points.row(i) - centers.row(labels[i])).squaredNorm();
            if (dd > worst_d) {
              worst_d = dd;
              worst = i;
            }
          }
          centers.row(c) = points.row(worst);
        }
      }
      const Eigen::VectorXi next = assign_nearest(points, centers);
      const bool stable = (next == labels);
      labels = next;
      if (stable) break;
    }

    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      inertia += (points.row(i) - centers.row(labels[i])).squaredNorm();
    }
    if (inertia < best.inertia) {
      best.inertia = inertia;
      best.labels = labels;
    }
  }
  return best;
}

ClusterAssignment spectral_cluster(const AugmentedAffinity& affinity, int r,
                                   std::uint64_t seed) {
  const Eigen::MatrixXd& z = affinity.z;
  const int n = static_cast<int>(z.rows());
  if (z.cols() != n) {
    throw std::invalid_argument("spectral_cluster: affinity must be square");
  }
  if (r < 1 || r > n) {
    throw std::invalid_argument("spectral_cluster: need 1 <= r <= n");
  }

  Eigen::VectorXd deg = z.rowwise().sum();
  Eigen::VectorXd scale(n);
  for (int i = 0; i < n; ++i) {
    scale[i] = deg[i] > 0.0 ? 1.0 / std::sqrt(deg[i]) : 0.0;
  }
  const Eigen::MatrixXd norm =
      scale.asDiagonal() * z * scale.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(norm);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("spectral_cluster: eigendecomposition failed");
  }
  Eigen::MatrixXd embed = eig.eigenvectors().rightCols(r);
  for (int i = 0; i < n; ++i) {
    const double len = embed.row(i).norm();
    if (len > 0.0) embed.row(i) /= len;
  }

  ClusterAssignment out;
  out.labels = kmeans(embed, r, seed).labels;
  out.seed = seed;
  out.config_fingerprint =
      fnv1a64("spectral;r=" + std::to_string(r) +
              ";seed=" + std::to_string(seed) + ";n=" + std::to_string(n));
  return out;
}

}  // namespace symclu
