#include <doctest.h>

#include <cmath>

#include "symclu/metrics.hpp"
#include "symclu/postcluster.hpp"
#include "symclu/random.hpp"
#include "testutil.hpp"

using namespace symclu;

namespace {

SparseGraph sparse_of(const Eigen::MatrixXd& dense) {
  SparseGraph s(dense.rows(), dense.cols());
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < dense.rows(); ++i) {
    for (int j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) trips.emplace_back(i, j, dense(i, j));
    }
  }
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

// block affinity: strong ring edges inside each group, weak edges across
Eigen::MatrixXd ring_affinity(int rings, int ring_size, double weak) {
  const int n = rings * ring_size;
  Eigen::MatrixXd z = Eigen::MatrixXd::Constant(n, n, weak);
  for (int r = 0; r < rings; ++r) {
    const int base = r * ring_size;
    for (int i = 0; i < ring_size; ++i) {
      const int a = base + i;
      const int b = base + (i + 1) % ring_size;
      z(a, b) = z(b, a) = 1.0;
    }
  }
  z.diagonal().setZero();
  return z;
}

}  // namespace

TEST_CASE("augmented_entry fixed values") {
  CHECK(augmented_entry(0.3, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(augmented_entry(0.9, 1.0, 0.0) == doctest::Approx(0.0));
  CHECK(augmented_entry(0.4, 0.5, 0.5) == doctest::Approx(0.4));
  CHECK(augmented_entry(0.4, 0.2, 0.5) == doctest::Approx(0.58));
}

TEST_CASE("augmented_entry bounds and monotonicity on the unit grid") {
  for (int si = 0; si <= 10; ++si) {
    for (int di = 0; di <= 10; ++di) {
      for (int yi = 0; yi <= 10; ++yi) {
        const double s = 0.1 * si, d = 0.1 * di, y = 0.1 * yi;
        const double z = augmented_entry(s, d, y);
        CHECK(z >= -1e-12);
        CHECK(z <= 1.0 + 1e-12);
        if (yi < 10) {
          CHECK(augmented_entry(s, d, y + 0.1) >= z - 1e-12);
        }
        if (di < 10) {
          CHECK(augmented_entry(s, d + 0.1, y) <= z + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("augment normalizes, symmetrizes and clamps") {
  Rng rng(61);
  Eigen::MatrixXd s_dense = testutil::random_matrix(6, 6, 0.0, 2.0, &rng);
  s_dense.diagonal().setZero();
  Eigen::MatrixXd d_dense = testutil::random_matrix(6, 6, 0.0, 3.0, &rng);
  d_dense.diagonal().setZero();
  const Eigen::MatrixXd v = testutil::random_matrix(6, 2, 0.0, 1.0, &rng);

  const AugmentedAffinity aff =
      augment(sparse_of(s_dense), sparse_of(d_dense), v);
  CHECK(aff.z.rows() == 6);
  CHECK((aff.z - aff.z.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(aff.z.diagonal().isZero());
  CHECK(aff.z.minCoeff() >= 0.0);
  CHECK(aff.z.maxCoeff() <= 1.0);

  // spot-check one off-diagonal entry against the scalar blend of the
  // max-rescaled inputs
  const Eigen::MatrixXd y = v * v.transpose();
  const double sm = s_dense.maxCoeff(), dm = d_dense.maxCoeff(),
               ym = y.maxCoeff();
  const double z01 = augmented_entry(s_dense(0, 1) / sm, d_dense(0, 1) / dm,
                                     y(0, 1) / ym);
  const double z10 = augmented_entry(s_dense(1, 0) / sm, d_dense(1, 0) / dm,
                                     y(1, 0) / ym);
  CHECK(aff.z(0, 1) ==
        doctest::Approx(std::clamp(0.5 * (z01 + z10), 0.0, 1.0)));

  // an all-zero dissimilarity stays zero instead of dividing by zero
  const AugmentedAffinity no_d =
      augment(sparse_of(s_dense), SparseGraph(6, 6), v);
  CHECK(no_d.z.allFinite());
}

TEST_CASE("kmeans") {
  SUBCASE("n distinct points, k = n") {
    Eigen::MatrixXd pts(4, 2);
    pts << 0, 0, 1, 0, 0, 1, 1, 1;
    const KmeansResult res = kmeans(pts, 4, 1);
    CHECK(res.inertia == doctest::Approx(0.0));
    std::vector<int> seen(4, 0);
    for (int i = 0; i < 4; ++i) ++seen[res.labels[i]];
    for (int c = 0; c < 4; ++c) CHECK(seen[c] == 1);
  }

  SUBCASE("identical points") {
    const Eigen::MatrixXd pts = Eigen::MatrixXd::Constant(6, 2, 3.0);
    const KmeansResult res = kmeans(pts, 2, 1);
    CHECK(res.inertia == doctest::Approx(0.0));
    for (int i = 1; i < 6; ++i) CHECK(res.labels[i] == res.labels[0]);
  }

  SUBCASE("two far blobs are recovered exactly") {
    const auto data = testutil::make_blobs(testutil::circle_centers(2, 10.0),
                                           {25, 25}, 1.0, 71);
    const KmeansResult res = kmeans(data.values, 2, 5);
    CHECK(testutil::acc_bruteforce(res.labels, *data.labels) ==
          doctest::Approx(1.0));
  }

  SUBCASE("preconditions") {
    const Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(3, 2);
    CHECK_THROWS_AS(kmeans(pts, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(kmeans(pts, 0, 1), std::invalid_argument);
  }
}

TEST_CASE("spectral clustering separates disconnected cliques") {
  const int n = 12;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && (i < 7) == (j < 7)) z(i, j) = 1.0;
    }
  }
  const ClusterAssignment assign = spectral_cluster({z}, 2, 9);
  Eigen::VectorXi want(n);
  for (int i = 0; i < n; ++i) want[i] = i < 7 ? 0 : 1;
  CHECK(acc(assign.labels, want) == doctest::Approx(1.0));

  SUBCASE("uniform scaling of the affinity does not matter") {
    const ClusterAssignment scaled = spectral_cluster({7.3 * z}, 2, 9);
    CHECK((scaled.labels - assign.labels).cwiseAbs().sum() == 0);
  }

  SUBCASE("permutation equivariance") {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = (i * 5 + 3) % n;
    Eigen::MatrixXd zp(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) zp(perm[i], perm[j]) = z(i, j);
    }
    const ClusterAssignment permuted = spectral_cluster({zp}, 2, 9);
    Eigen::VectorXi expected(n);
    for (int i = 0; i < n; ++i) expected[perm[i]] = assign.labels[i];
    CHECK(acc(permuted.labels, expected) == doctest::Approx(1.0));
  }

  SUBCASE("r out of range") {
    CHECK_THROWS_AS(spectral_cluster({z}, n + 1, 1), std::invalid_argument);
  }
}

TEST_CASE("spectral clustering agrees with the exhaustive cut oracle") {
  // small instance first: the global normalized-cut optimum is enumerable
  const Eigen::MatrixXd small = ring_affinity(3, 4, 0.05);
  const std::vector<int> best = testutil::min_ncut_bruteforce(small, 3);
  Eigen::VectorXi oracle(12);
  for (int i = 0; i < 12; ++i) oracle[i] = best[i];
  const ClusterAssignment small_assign = spectral_cluster({small}, 3, 13);
  CHECK(acc(small_assign.labels, oracle) == doctest::Approx(1.0));

  // the oracle must itself find the rings
  Eigen::VectorXi rings(12);
  for (int i = 0; i < 12; ++i) rings[i] = i / 4;
  CHECK(testutil::same_partition(oracle, rings));

  // the 30-node instance keeps the same structure; ring recovery expected
  const Eigen::MatrixXd big = ring_affinity(3, 10, 0.02);
  const ClusterAssignment big_assign = spectral_cluster({big}, 3, 13);
  Eigen::VectorXi big_rings(30);
  for (int i = 0; i < 30; ++i) big_rings[i] = i / 10;
  CHECK(acc(big_assign.labels, big_rings) == doctest::Approx(1.0));

  // and the returned partition beats random relabelings on normalized cut
  std::vector<int> got(30);
  for (int i = 0; i < 30; ++i) got[i] = big_assign.labels[i];
  const double got_cut = testutil::ncut_value(big, got, 3);
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> other(30);
    for (int i = 0; i < 30; ++i) other[i] = rng.uniform_int(3);
    CHECK(got_cut <= testutil::ncut_value(big, other, 3) + 1e-12);
  }
}
