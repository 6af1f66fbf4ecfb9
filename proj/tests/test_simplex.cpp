#include <doctest.h>

#include <cmath>

#include "symclu/random.hpp"
#include "symclu/simplex.hpp"
#include "testutil.hpp"

using namespace symclu;

TEST_CASE("project_simplex fixed cases") {
  Eigen::Vector3d feasible(1.0, 0.0, 0.0);
  CHECK((project_simplex(feasible).coeffs() - feasible).norm() == 0.0);

  const Eigen::VectorXd constant = Eigen::VectorXd::Constant(5, 3.7);
  CHECK(project_simplex(constant).coeffs().isApproxToConstant(0.2, 1e-12));

  Eigen::Vector3d y(0.9, 0.5, -0.2);
  const Eigen::VectorXd got = project_simplex(y).coeffs();
  const Eigen::VectorXd want = testutil::project_simplex_oracle(y);
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(got[0] == doctest::Approx(0.7));
  CHECK(got[1] == doctest::Approx(0.3));
  CHECK(got[2] == doctest::Approx(0.0));
}

TEST_CASE("project_simplex matches the active-set oracle") {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + rng.uniform_int(10);
    Eigen::VectorXd y(k);
    for (int i = 0; i < k; ++i) y[i] = 4.0 * rng.uniform() - 2.0;
    const Eigen::VectorXd got = project_simplex(y).coeffs();
    const Eigen::VectorXd want = testutil::project_simplex_oracle(y);
    REQUIRE((got - want).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("project_simplex optimality and idempotence") {
  Rng rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + rng.uniform_int(20);
    Eigen::VectorXd y(k);
    for (int i = 0; i < k; ++i) y[i] = 6.0 * rng.uniform() - 3.0;
    const Eigen::VectorXd proj = project_simplex(y).coeffs();

    // no feasible point is closer
    for (int z_trial = 0; z_trial < 20; ++z_trial) {
      Eigen::VectorXd raw(k);
      for (int i = 0; i < k; ++i) raw[i] = rng.uniform();
      const Eigen::VectorXd z = raw / raw.sum();
      CHECK((proj - y).norm() <= (z - y).norm() + 1e-12);
    }
    CHECK((project_simplex(proj).coeffs() - proj).cwiseAbs().maxCoeff() <
          1e-14);
  }
}

TEST_CASE("project_simplex rejects non-finite input") {
  Eigen::Vector2d y(1.0, std::nan(""));
  CHECK_THROWS_AS(project_simplex(y), std::invalid_argument);
}

TEST_CASE("solve_wp symmetric flat case") {
  WpSubproblem prob;
  prob.c = Eigen::VectorXd::Constant(6, 0.4);
  prob.mu = 0.5;
  prob.eta = 0.0;
  prob.beta = 0.0;
  const SimplexWeights init(Eigen::VectorXd::Constant(6, 1.0 / 6));
  const WpSolution sol = solve_wp(prob, init, init);
  CHECK(sol.w.coeffs().isApproxToConstant(1.0 / 6, 1e-12));
  CHECK(sol.p.coeffs().isApproxToConstant(1.0 / 6, 1e-12));
}

TEST_CASE("solve_wp two-slice case against the KKT enumeration oracle") {
  WpSubproblem prob;
  prob.c = Eigen::Vector2d(1.0, 0.0);
  prob.mu = 0.1;
  prob.eta = 0.099;
  prob.beta = 1.0;
  const SimplexWeights init(Eigen::Vector2d(0.5, 0.5));
  const WpSolution sol = solve_wp(prob, init, init);

  // exhaustive check over the 2-d parametrization w = (a, 1-a), p = (b, 1-b)
  double best = std::numeric_limits<double>::infinity();
  double best_a = 0.0, best_b = 0.0;
  for (int ia = 0; ia <= 1000; ++ia) {
    for (int ib = 0; ib <= 1000; ++ib) {
      const Eigen::Vector2d w(ia / 1000.0, 1.0 - ia / 1000.0);
      const Eigen::Vector2d p(ib / 1000.0, 1.0 - ib / 1000.0);
      const double f = wp_objective(prob, w, p);
      if (f < best) {
        best = f;
        best_a = w[0];
        best_b = p[0];
      }
    }
  }
  CHECK(best_a == doctest::Approx(1.0));
  CHECK(best_b == doctest::Approx(0.0));
  CHECK(sol.w.coeffs()[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sol.p.coeffs()[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sol.coupled);
}

TEST_CASE("solve_wp heavy density flattens the weights") {
  Rng rng(77);
  WpSubproblem prob;
  prob.c = Eigen::VectorXd(5);
  for (int i = 0; i < 5; ++i) prob.c[i] = 0.05 * rng.uniform();
  prob.mu = 10.0;
  prob.eta = 0.5;
  prob.beta = 1.0;
  const SimplexWeights init(Eigen::VectorXd::Constant(5, 0.2));
  const WpSolution sol = solve_wp(prob, init, init);

  CHECK((sol.w.coeffs().array() - 0.2).abs().maxCoeff() < 1e-2);
  CHECK((sol.p.coeffs().array() - 0.2).abs().maxCoeff() < 1e-2);

  const auto [w_ref, p_ref] = testutil::wp_pg_oracle(prob, 50000);
  CHECK((sol.w.coeffs() - w_ref).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((sol.p.coeffs() - p_ref).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("solve_wp objective is nonincreasing and the optimum unique") {
  Rng rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 3 + rng.uniform_int(20);
    WpSubproblem prob;
    prob.c = Eigen::VectorXd(k);
    for (int i = 0; i < k; ++i) prob.c[i] = rng.normal();
    prob.mu = 0.2 + rng.uniform();
    prob.eta = 0.5 * prob.mu;
    prob.beta = 5.0 * rng.uniform();

    auto random_simplex = [&] {
      Eigen::VectorXd raw(k);
      for (int i = 0; i < k; ++i) raw[i] = rng.uniform() + 1e-3;
      return SimplexWeights(project_simplex(raw).coeffs());
    };
    const WpSolution a = solve_wp(prob, random_simplex(), random_simplex());
    const WpSolution b = solve_wp(prob, random_simplex(), random_simplex());

    for (std::size_t i = 1; i < a.objective_trace.size(); ++i) {
      CHECK(a.objective_trace[i] <= a.objective_trace[i - 1] + 1e-12);
    }
    CHECK((a.w.coeffs() - b.w.coeffs()).norm() < 1e-8);
    CHECK((a.p.coeffs() - b.p.coeffs()).norm() < 1e-8);
    CHECK(a.coupled == (a.w.coeffs().dot(a.p.coeffs()) <= 1e-12));
  }
}

TEST_CASE("solve_wp rejects mu <= eta") {
  WpSubproblem prob;
  prob.c = Eigen::Vector3d(0.1, 0.2, 0.3);
  prob.mu = 0.1;
  prob.eta = 0.1;
  const SimplexWeights init(Eigen::Vector3d(0.3, 0.3, 0.4));
  CHECK_THROWS_AS(solve_wp(prob, init, init), std::invalid_argument);
}
