#include "symclu/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "symclu/metrics.hpp"
#include "symclu/postcluster.hpp"
#include "symclu/random.hpp"

namespace symclu {

namespace {

using nlohmann::ordered_json;

int infer_rank(const DataMatrix& data) {
  if (!data.labels) {
    throw std::invalid_argument(
        "rank not set and the dataset has no labels to infer it from");
  }
  std::set<int> distinct(data.labels->data(),
                         data.labels->data() + data.labels->size());
  return static_cast<int>(distinct.size());
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / xs.size();
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / (xs.size() - 1));
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::ofstream open_out(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

ordered_json config_json(const ExperimentSpec& spec, const SolverConfig& cfg) {
  ordered_json j;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["mu"] = cfg.mu;
  j["eta_ratio"] = cfg.eta_ratio;
  j["rank"] = cfg.rank;
  j["max_iter"] = cfg.max_iter;
  j["tol_loss"] = cfg.tol_loss;
  j["tol_var"] = cfg.tol_var;
  j["mode"] = mode_name(cfg.mode);
  j["scale_rank"] = spec.scale_rank;
  j["repetitions"] = spec.repetitions;
  j["spectral_reps"] = spec.spectral_reps;
  j["master_seed"] = spec.config.seed;
  return j;
}

ordered_json aggregate_json(const Aggregate& agg) {
  ordered_json j;
  j["runs"] = agg.runs;
  if (agg.labeled) {
    j["acc"] = {{"mean", agg.acc_mean}, {"std", agg.acc_std}};
    j["nmi"] = {{"mean", agg.nmi_mean}, {"std", agg.nmi_std}};
  } else {
    j["acc"] = nullptr;
    j["nmi"] = nullptr;
  }
  j["coupled_fraction"] = agg.coupled_fraction;
  j["mean_iterations"] = agg.mean_iterations;
  return j;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (repetitions < 1) {
    throw std::invalid_argument("ExperimentSpec: repetitions must be >= 1");
  }
  if (spectral_reps < 1) {
    throw std::invalid_argument("ExperimentSpec: spectral_reps must be >= 1");
  }
  if (scale_rank < 1) {
    throw std::invalid_argument("ExperimentSpec: scale_rank must be >= 1");
  }
  for (double a : grid_alpha) {
    if (a < 0.0) throw std::invalid_argument("grid: alpha must be >= 0");
  }
  for (double b : grid_beta) {
    if (b < 0.0) throw std::invalid_argument("grid: beta must be >= 0");
  }
  for (double m : grid_mu) {
    if (!(m > 0.0)) throw std::invalid_argument("grid: mu must be positive");
  }
}

Aggregate aggregate_runs(const std::vector<RunRecord>& runs) {
  Aggregate agg;
  agg.runs = static_cast<int>(runs.size());
  if (runs.empty()) return agg;
  agg.labeled = !std::isnan(runs.front().acc);

  std::vector<double> accs, nmis, iters;
  int coupled = 0;
  for (const RunRecord& r : runs) {
    if (agg.labeled) {
      accs.push_back(r.acc);
      nmis.push_back(r.nmi);
    }
    iters.push_back(static_cast<double>(r.iterations));
    if (r.coupled) ++coupled;
  }
  agg.acc_mean = mean_of(accs);
  agg.acc_std = sample_std(accs);
  agg.nmi_mean = mean_of(nmis);
  agg.nmi_std = sample_std(nmis);
  agg.coupled_fraction = static_cast<double>(coupled) / runs.size();
  agg.mean_iterations = mean_of(iters);
  return agg;
}

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const DataMatrix& data) {
  spec.validate();
  data.validate();

  SolverConfig cfg = spec.config;
  if (cfg.rank <= 0) cfg.rank = infer_rank(data);

  const Eigen::MatrixXd kernel = self_tuning_kernel(data, spec.scale_rank);
  const NeighborSlices slices = build_slices(kernel);

  ExperimentResult result;
  result.resolved_rank = cfg.rank;
  result.n = data.n();
  result.m = data.dim();
  if (data.labels) result.correct_rates = correct_rate(slices, *data.labels);

  const std::uint64_t master = spec.config.seed;
  try {
    for (int rep = 0; rep < spec.repetitions; ++rep) {
      SolverConfig run_cfg = cfg;
      run_cfg.seed = derive_seed(master, rep);

      const auto tic = std::chrono::steady_clock::now();
      const SolverState state = fit(slices, run_cfg);
      const AugmentedAffinity z = augment(state.s, state.d, state.v);

      RunRecord record;
      record.rep = rep;
      record.seed = run_cfg.seed;
      record.config = run_cfg;
      if (data.labels) {
        std::vector<double> accs, nmis;
        for (int s = 0; s < spec.spectral_reps; ++s) {
          const ClusterAssignment assign =
              spectral_cluster(z, cfg.rank, derive_seed(run_cfg.seed, s + 1));
          accs.push_back(acc(assign.labels, *data.labels));
          nmis.push_back(nmi(assign.labels, *data.labels));
        }
        record.acc = mean_of(accs);
        record.nmi = mean_of(nmis);
      }
      record.iterations = state.iterations;
      record.exit_reason = state.exit_reason;
      record.coupled = state.coupled;
      record.final_loss = state.loss_trace.back();
      for (double d_norm : state.final_kkt) {
        record.max_kkt = std::max(record.max_kkt, d_norm * d_norm);
      }
      record.final_w = state.w.coeffs();
      record.final_p = state.p.coeffs();
      record.loss_trace = state.loss_trace;
      record.delta_trace = state.delta_trace;
      record.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - tic)
              .count();
      result.runs.push_back(std::move(record));
    }
  } catch (...) {
    // flush whatever finished before propagating
    if (!spec.out_dir.empty() && !result.runs.empty()) {
      write_runs_csv(spec.out_dir + "/runs.csv", result.runs);
    }
    throw;
  }
  result.aggregate = aggregate_runs(result.runs);
  return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  return run_experiment(spec, load_dataset(spec.dataset_path, spec.format));
}

std::vector<std::pair<Mode, ExperimentResult>> run_ablation(
    const ExperimentSpec& spec, const DataMatrix& data) {
  std::vector<std::pair<Mode, ExperimentResult>> rows;
  for (Mode mode : all_modes()) {
    ExperimentSpec mode_spec = spec;
    mode_spec.config.mode = mode;
    rows.emplace_back(mode, run_experiment(mode_spec, data));
  }
  return rows;
}

std::vector<GridCell> run_grid(const ExperimentSpec& spec,
                               const DataMatrix& data) {
  const auto values = [](const std::vector<double>& grid, double fallback) {
    return grid.empty() ? std::vector<double>{fallback} : grid;
  };
  std::vector<GridCell> cells;
  for (double a : values(spec.grid_alpha, spec.config.alpha)) {
    for (double b : values(spec.grid_beta, spec.config.beta)) {
      for (double m : values(spec.grid_mu, spec.config.mu)) {
        ExperimentSpec cell_spec = spec;
        cell_spec.config.alpha = a;
        cell_spec.config.beta = b;
        cell_spec.config.mu = m;
        cells.push_back({a, b, m, run_experiment(cell_spec, data)});
      }
    }
  }
  return cells;
}

std::uint64_t config_fingerprint(const ExperimentSpec& spec) {
  return fnv1a64(config_json(spec, spec.config).dump());
}

void write_runs_csv(const std::string& path,
                    const std::vector<RunRecord>& runs) {
  std::ofstream out = open_out(path);
  out << "rep,seed,mode,alpha,beta,mu,eta_ratio,rank,iterations,exit_reason,"
         "coupled,acc,nmi,final_loss,max_kkt,wall_time_s\n";
  for (const RunRecord& r : runs) {
    out << r.rep << ',' << r.seed << ',' << mode_name(r.config.mode) << ','
        << fmt(r.config.alpha) << ',' << fmt(r.config.beta) << ','
        << fmt(r.config.mu) << ',' << fmt(r.config.eta_ratio) << ','
        << r.config.rank << ',' << r.iterations << ','
        << exit_reason_name(r.exit_reason) << ',' << (r.coupled ? 1 : 0)
        << ',' << (std::isnan(r.acc) ? "" : fmt(r.acc)) << ','
        << (std::isnan(r.nmi) ? "" : fmt(r.nmi)) << ',' << fmt(r.final_loss)
        << ',' << fmt(r.max_kkt) << ',' << fmt(r.wall_time_s) << '\n';
  }
}

void write_wp_curves_csv(const std::string& path,
                         const std::vector<RunRecord>& runs,
                         const Eigen::VectorXd& correct_rates) {
  std::ofstream out = open_out(path);
  out << "rep,k,w,p,correct_rate\n";
  for (const RunRecord& r : runs) {
    for (int k = 0; k < r.final_w.size(); ++k) {
      out << r.rep << ',' << (k + 1) << ',' << fmt(r.final_w[k]) << ','
          << fmt(r.final_p[k]) << ',';
      if (correct_rates.size() > k) out << fmt(correct_rates[k]);
      out << '\n';
    }
  }
}

void write_loss_trace_csv(const std::string& path,
                          const std::vector<RunRecord>& runs) {
  std::ofstream out = open_out(path);
  out << "rep,iteration,loss,delta\n";
  for (const RunRecord& r : runs) {
    for (std::size_t i = 0; i < r.loss_trace.size(); ++i) {
      out << r.rep << ',' << i << ',' << fmt(r.loss_trace[i]) << ',';
      if (i >= 1 && i - 1 < r.delta_trace.size()) {
        out << fmt(r.delta_trace[i - 1]);
      }
      out << '\n';
    }
  }
}

void write_aggregate_json(const std::string& path, const ExperimentSpec& spec,
                          const ExperimentResult& result) {
  ordered_json j;
  j["dataset"] = spec.dataset_path;
  j["format"] = format_name(spec.format);
  j["n"] = result.n;
  j["m"] = result.m;
  j["rank"] = result.resolved_rank;
  j["config"] = config_json(spec, spec.config);
  j["fingerprint"] = config_fingerprint(spec);
  j["aggregate"] = aggregate_json(result.aggregate);
  open_out(path) << j.dump(2) << '\n';
}

void write_ablation_json(
    const std::string& path, const ExperimentSpec& spec,
    const std::vector<std::pair<Mode, ExperimentResult>>& rows) {
  ordered_json j;
  j["dataset"] = spec.dataset_path;
  j["config"] = config_json(spec, spec.config);
  ordered_json modes;
  for (const auto& [mode, result] : rows) {
    modes[mode_name(mode)] = aggregate_json(result.aggregate);
  }
  j["modes"] = modes;
  open_out(path) << j.dump(2) << '\n';
}

void write_grid_json(const std::string& path, const ExperimentSpec& spec,
                     const std::vector<GridCell>& cells) {
  ordered_json j;
  j["dataset"] = spec.dataset_path;
  j["config"] = config_json(spec, spec.config);
  ordered_json arr = ordered_json::array();
  for (const GridCell& cell : cells) {
    ordered_json c;
    c["alpha"] = cell.alpha;
    c["beta"] = cell.beta;
    c["mu"] = cell.mu;
    c["aggregate"] = aggregate_json(cell.result.aggregate);
    arr.push_back(c);
  }
  j["cells"] = arr;
  open_out(path) << j.dump(2) << '\n';
}

}  // namespace symclu
