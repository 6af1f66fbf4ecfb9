#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "symclu/experiment.hpp"
#include "symclu/random.hpp"
#include "testutil.hpp"

using namespace symclu;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.config.rank = 2;
  spec.config.seed = 42;
  spec.config.max_iter = 60;
  spec.repetitions = 2;
  spec.spectral_reps = 3;
  return spec;
}

}  // namespace

TEST_CASE("solver defaults match the recommended setting") {
  const SolverConfig cfg;
  CHECK(cfg.alpha == doctest::Approx(0.1));
  CHECK(cfg.mu == doctest::Approx(0.1));
  CHECK(cfg.beta == doctest::Approx(10.0));
  CHECK(cfg.eta_ratio == doctest::Approx(0.99));
  CHECK(cfg.max_iter == 1000);
  CHECK(cfg.tol_loss == doctest::Approx(1e-4));
  CHECK(cfg.tol_var == doctest::Approx(1e-4));
  CHECK(cfg.mode == Mode::kFull);

  const ExperimentSpec spec;
  CHECK(spec.repetitions == 20);
  CHECK(spec.spectral_reps == 20);
  CHECK(spec.scale_rank == 7);
}

TEST_CASE("a separable instance clusters perfectly in one repetition") {
  const auto data = testutil::make_blobs(testutil::circle_centers(2, 8.0),
                                         {20, 20}, 0.5, 7);
  ExperimentSpec spec = small_spec();
  spec.repetitions = 1;
  const ExperimentResult result = run_experiment(spec, data);
  REQUIRE(result.runs.size() == 1);
  CHECK(result.runs.front().acc == doctest::Approx(1.0));
  CHECK(result.aggregate.labeled);
}

TEST_CASE("runs are reproducible and the aggregate JSON is byte-identical") {
  const auto data = testutil::make_blobs(testutil::circle_centers(2, 6.0),
                                         {15, 15}, 0.6, 9);
  const ExperimentSpec spec = small_spec();
  const ExperimentResult a = run_experiment(spec, data);
  const ExperimentResult b = run_experiment(spec, data);

  REQUIRE(a.runs.size() == b.runs.size());
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    CHECK(a.runs[i].seed == b.runs[i].seed);
    CHECK(a.runs[i].acc == b.runs[i].acc);
    CHECK(a.runs[i].nmi == b.runs[i].nmi);
    CHECK(a.runs[i].iterations == b.runs[i].iterations);
    CHECK(a.runs[i].final_loss == b.runs[i].final_loss);
    CHECK((a.runs[i].final_w - b.runs[i].final_w).norm() == 0.0);
  }

  const auto dir = std::filesystem::temp_directory_path() / "symclu_agg";
  std::filesystem::create_directories(dir);
  write_aggregate_json((dir / "a.json").string(), spec, a);
  write_aggregate_json((dir / "b.json").string(), spec, b);
  CHECK(slurp((dir / "a.json").string()) == slurp((dir / "b.json").string()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("aggregates are recomputable from the run records") {
  const auto data = testutil::make_blobs(testutil::circle_centers(3, 5.0),
                                         {12, 12, 12}, 0.8, 13);
  ExperimentSpec spec = small_spec();
  spec.repetitions = 4;
  spec.config.rank = 3;
  const ExperimentResult result = run_experiment(spec, data);

  double acc_sum = 0.0, nmi_sum = 0.0;
  for (const RunRecord& r : result.runs) {
    acc_sum += r.acc;
    nmi_sum += r.nmi;
  }
  CHECK(result.aggregate.acc_mean ==
        doctest::Approx(acc_sum / 4).epsilon(1e-12));
  CHECK(result.aggregate.nmi_mean ==
        doctest::Approx(nmi_sum / 4).epsilon(1e-12));
  double var = 0.0;
  for (const RunRecord& r : result.runs) {
    var += (r.acc - result.aggregate.acc_mean) *
           (r.acc - result.aggregate.acc_mean);
  }
  CHECK(result.aggregate.acc_std ==
        doctest::Approx(std::sqrt(var / 3)).epsilon(1e-12));
}

TEST_CASE("unlabeled data yields null metrics but full traces") {
  auto data = testutil::make_blobs(testutil::circle_centers(2, 6.0), {15, 15},
                                   0.5, 21);
  data.labels.reset();
  ExperimentSpec spec = small_spec();
  spec.repetitions = 1;
  const ExperimentResult result = run_experiment(spec, data);
  CHECK_FALSE(result.aggregate.labeled);
  CHECK(std::isnan(result.runs.front().acc));
  CHECK(result.correct_rates.size() == 0);
  CHECK(result.runs.front().loss_trace.size() > 1);
}

TEST_CASE("the plain variant still solves an easy separable instance") {
  const auto data = testutil::make_blobs(testutil::circle_centers(2, 4.0),
                                         {20, 20}, 0.5, 33);
  ExperimentSpec spec = small_spec();
  spec.repetitions = 1;
  spec.spectral_reps = 5;
  spec.config.mode = Mode::kPlain;
  const ExperimentResult result = run_experiment(spec, data);
  CHECK(result.runs.front().acc == doctest::Approx(1.0));
}

TEST_CASE("rank is inferred from labels when unset") {
  const auto data = testutil::make_blobs(testutil::circle_centers(3, 8.0),
                                         {12, 12, 12}, 0.5, 3);
  ExperimentSpec spec = small_spec();
  spec.repetitions = 1;
  spec.config.rank = 0;
  const ExperimentResult result = run_experiment(spec, data);
  CHECK(result.resolved_rank == 3);

  DataMatrix unlabeled = data;
  unlabeled.labels.reset();
  CHECK_THROWS_AS(run_experiment(spec, unlabeled), std::invalid_argument);
}

TEST_CASE("ablation rows share per-repetition seeds") {
  const auto data = testutil::make_blobs(testutil::circle_centers(2, 6.0),
                                         {12, 12}, 0.7, 5);
  ExperimentSpec spec = small_spec();
  spec.config.max_iter = 30;
  const auto rows = run_ablation(spec, data);
  REQUIRE(rows.size() == 5);
  for (const auto& [mode, result] : rows) {
    REQUIRE(result.runs.size() == rows.front().second.runs.size());
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
      CHECK(result.runs[i].seed == rows.front().second.runs[i].seed);
    }
  }
}

TEST_CASE("grid covers the cartesian product") {
  const auto data = testutil::make_blobs(testutil::circle_centers(2, 6.0),
                                         {10, 10}, 0.5, 6);
  ExperimentSpec spec = small_spec();
  spec.repetitions = 1;
  spec.spectral_reps = 1;
  spec.config.max_iter = 20;
  spec.grid_alpha = {0.05, 0.1};
  spec.grid_mu = {0.1, 0.3, 0.5};
  const auto cells = run_grid(spec, data);
  CHECK(cells.size() == 6);
  CHECK(cells.front().beta == doctest::Approx(spec.config.beta));
}

TEST_CASE("csv writers emit the documented schemas") {
  const auto data = testutil::make_blobs(testutil::circle_centers(2, 6.0),
                                         {12, 12}, 0.5, 8);
  ExperimentSpec spec = small_spec();
  spec.repetitions = 1;
  const ExperimentResult result = run_experiment(spec, data);

  const auto dir = std::filesystem::temp_directory_path() / "symclu_csv";
  std::filesystem::create_directories(dir);
  write_runs_csv((dir / "runs.csv").string(), result.runs);
  write_wp_curves_csv((dir / "wp_curves.csv").string(), result.runs,
                      result.correct_rates);
  write_loss_trace_csv((dir / "loss_trace.csv").string(), result.runs);

  std::ifstream runs(dir / "runs.csv");
  std::string header;
  std::getline(runs, header);
  CHECK(header ==
        "rep,seed,mode,alpha,beta,mu,eta_ratio,rank,iterations,exit_reason,"
        "coupled,acc,nmi,final_loss,max_kkt,wall_time_s");
  int rows = 0;
  std::string line;
  while (std::getline(runs, line)) ++rows;
  CHECK(rows == 1);

  std::ifstream curves(dir / "wp_curves.csv");
  std::getline(curves, header);
  CHECK(header == "rep,k,w,p,correct_rate");
  rows = 0;
  while (std::getline(curves, line)) ++rows;
  CHECK(rows == data.n() - 1);  // one row per slice for the single rep

  std::ifstream trace(dir / "loss_trace.csv");
  std::getline(trace, header);
  CHECK(header == "rep,iteration,loss,delta");
  rows = 0;
  while (std::getline(trace, line)) ++rows;
  CHECK(rows ==
        static_cast<int>(result.runs.front().loss_trace.size()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment spec validation") {
  ExperimentSpec spec = small_spec();
  spec.repetitions = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = small_spec();
  spec.grid_mu = {0.0};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = small_spec();
  spec.grid_alpha = {-1.0};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
