#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "symclu/graph.hpp"
#include "symclu/types.hpp"

namespace symclu {

/// Symmetric nonnegative affinity with zero diagonal and entries in [0, 1].
struct AugmentedAffinity {
  Eigen::MatrixXd z;
};

/// Two-branch blend of similarity s, dissimilarity d and factor agreement y,
/// all taken in [0, 1]: agreement at least as strong as the dissimilarity
/// boosts s toward one, otherwise s is damped toward zero. At y = d the
/// blend reduces to s.
double augmented_entry(double s, double d, double y);

/// Builds the augmented affinity from the learned graphs and factor:
/// S, D and Y = VV' are each rescaled by their global max (left as zeros if
/// the max is zero), blended entrywise, then symmetrized, diagonal-zeroed
/// and clamped to [0, 1].
AugmentedAffinity augment(const SparseGraph& s, const SparseGraph& d,
                          const Eigen::MatrixXd& v);

struct KmeansResult {
  Eigen::VectorXi labels;
  double inertia = 0.0;
};

/// Seeded k-means: k-means++ seeding, Lloyd iterations (<= max_iter),
/// restarts with the best inertia winning. Deterministic per seed.
KmeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    int restarts = 10, int max_iter = 100);

/// Normalized-affinity spectral clustering: scale Z by Deg^{-1/2} on both
/// sides (zero-degree rows get zero scaling), embed with the eigenvectors of
/// the r largest eigenvalues, normalize rows to unit length (zero rows stay
/// zero) and run k-means on the embedding.
ClusterAssignment spectral_cluster(const AugmentedAffinity& affinity, int r,
                                   std::uint64_t seed);

}  // namespace symclu
