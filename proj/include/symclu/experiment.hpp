#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "symclu/dataset.hpp"
#include "symclu/graph.hpp"
#include "symclu/solver.hpp"
#include "symclu/types.hpp"

namespace symclu {

/// One experiment: repeated seeded fits, each followed by repeated seeded
/// spectral clusterings whose metrics are averaged. config.seed acts as the
/// master seed; per-repetition seeds are derive_seed(master, rep) and
/// spectral sub-seeds derive_seed(rep_seed, s + 1), so modes and grid cells
/// sharing a master seed pair their runs.
struct ExperimentSpec {
  std::string dataset_path;
  DatasetFormat format = DatasetFormat::kLabelLast;
  SolverConfig config;      // config.rank <= 0 means: infer from labels
  int repetitions = 20;
  int spectral_reps = 20;
  int scale_rank = 7;
  std::vector<double> grid_alpha;
  std::vector<double> grid_beta;
  std::vector<double> grid_mu;
  std::string out_dir;

  void validate() const;
};

struct RunRecord {
  int rep = 0;
  std::uint64_t seed = 0;
  SolverConfig config;
  double acc = std::numeric_limits<double>::quiet_NaN();
  double nmi = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  ExitReason exit_reason = ExitReason::kMaxIter;
  double wall_time_s = 0.0;
  bool coupled = false;
  double final_loss = 0.0;
  double max_kkt = 0.0;  // max_j |v_j|^4 |d|^2 at the exit point
  Eigen::VectorXd final_w;
  Eigen::VectorXd final_p;
  std::vector<double> loss_trace;
  std::vector<double> delta_trace;
};

struct Aggregate {
  int runs = 0;
  bool labeled = false;
  double acc_mean = 0.0, acc_std = 0.0;
  double nmi_mean = 0.0, nmi_std = 0.0;
  double coupled_fraction = 0.0;
  double mean_iterations = 0.0;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;
  Aggregate aggregate;
  Eigen::VectorXd correct_rates;  // empty when the dataset is unlabeled
  int resolved_rank = 0;
  int n = 0, m = 0;
};

Aggregate aggregate_runs(const std::vector<RunRecord>& runs);

/// Resolves the rank (from labels when config.rank <= 0), builds the kernel
/// and slices once, then runs the repetitions.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const DataMatrix& data);

/// Loads the dataset from spec.dataset_path first.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// One row per mode, repetitions paired through shared per-rep seeds.
std::vector<std::pair<Mode, ExperimentResult>> run_ablation(
    const ExperimentSpec& spec, const DataMatrix& data);

struct GridCell {
  double alpha, beta, mu;
  ExperimentResult result;
};

/// Cartesian product over the grid lists (empty list = the configured value).
std::vector<GridCell> run_grid(const ExperimentSpec& spec,
                               const DataMatrix& data);

/// Stable hash of the experiment configuration (solver fields, protocol
/// fields and master seed); part of the emitted provenance.
std::uint64_t config_fingerprint(const ExperimentSpec& spec);

// --- structured output (schemas documented in the README) ---
void write_runs_csv(const std::string& path,
                    const std::vector<RunRecord>& runs);
void write_wp_curves_csv(const std::string& path,
                         const std::vector<RunRecord>& runs,
                         const Eigen::VectorXd& correct_rates);
void write_loss_trace_csv(const std::string& path,
                          const std::vector<RunRecord>& runs);
void write_aggregate_json(const std::string& path, const ExperimentSpec& spec,
                          const ExperimentResult& result);
void write_ablation_json(
    const std::string& path, const ExperimentSpec& spec,
    const std::vector<std::pair<Mode, ExperimentResult>>& rows);
void write_grid_json(const std::string& path, const ExperimentSpec& spec,
                     const std::vector<GridCell>& cells);

}  // namespace symclu
