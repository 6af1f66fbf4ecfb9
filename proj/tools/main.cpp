// Command-line front end: dataset ingestion, seeded experiment
// orchestration and structured result emission.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "symclu/experiment.hpp"
#include "symclu/metrics.hpp"
#include "symclu/postcluster.hpp"
#include "symclu/random.hpp"

namespace {

struct Options {
  std::string dataset;
  std::string format = "label-last";
  std::string out_dir = "out";
  std::string mode = "full";
  std::string config_file;
  double alpha = 0.1;
  double beta = 10.0;
  double mu = 0.1;
  double eta_ratio = 0.99;
  int rank = 0;  // 0: infer from labels
  int max_iter = 1000;
  double tol_loss = 1e-4;
  double tol_var = 1e-4;
  std::uint64_t seed = 0;
  int reps = 20;
  int spectral_reps = 20;
  int scale_rank = 7;
  std::vector<double> grid_alpha, grid_beta, grid_mu;
};

void add_common(CLI::App* cmd, Options* o) {
  cmd->add_option("dataset", o->dataset, "CSV dataset, one sample per row")
      ->required();
  cmd->add_option("--format", o->format,
                  "label-last (default) or features-only");
  cmd->add_option("--out", o->out_dir, "output directory");
  cmd->add_option("--alpha", o->alpha, "orthogonality weight");
  cmd->add_option("--beta", o->beta, "dissimilarity weight");
  cmd->add_option("--mu", o->mu, "density weight");
  cmd->add_option("--eta-ratio", o->eta_ratio, "coupling penalty / mu");
  cmd->add_option("--rank", o->rank, "cluster count (0: infer from labels)");
  cmd->add_option("--mode", o->mode,
                  "full | no_orth | no_dissim | plain | ao_symnmf");
  cmd->add_option("--seed", o->seed, "master seed");
  cmd->add_option("--reps", o->reps, "fit repetitions");
  cmd->add_option("--spectral-reps", o->spectral_reps,
                  "spectral clustering repetitions per fit");
  cmd->add_option("--scale-rank", o->scale_rank,
                  "neighbor rank of the self-tuning kernel scale");
  cmd->add_option("--max-iter", o->max_iter, "solver iteration cap");
  cmd->add_option("--tol-loss", o->tol_loss, "relative loss tolerance");
  cmd->add_option("--tol-var", o->tol_var, "relative variable tolerance");
  cmd->add_option("--config", o->config_file,
                  "flat key=value file; explicit flags win");
}

// flat key=value configuration; keys match the long flag names. Values from
// the file fill in only the options not given on the command line.
void apply_config_file(const CLI::App& cmd, Options* o) {
  if (o->config_file.empty()) return;
  std::ifstream in(o->config_file);
  if (!in) {
    throw std::runtime_error("cannot open config file " + o->config_file);
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto strip = [](const std::string& s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    if (strip(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key=value");
    }
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (cmd.count("--" + key) > 0) continue;  // explicit flag wins

    try {
      if (key == "format") o->format = value;
      else if (key == "out") o->out_dir = value;
      else if (key == "mode") o->mode = value;
      else if (key == "alpha") o->alpha = std::stod(value);
      else if (key == "beta") o->beta = std::stod(value);
      else if (key == "mu") o->mu = std::stod(value);
      else if (key == "eta-ratio") o->eta_ratio = std::stod(value);
      else if (key == "rank") o->rank = std::stoi(value);
      else if (key == "seed") o->seed = std::stoull(value);
      else if (key == "reps") o->reps = std::stoi(value);
      else if (key == "spectral-reps") o->spectral_reps = std::stoi(value);
      else if (key == "scale-rank") o->scale_rank = std::stoi(value);
      else if (key == "max-iter") o->max_iter = std::stoi(value);
      else if (key == "tol-loss") o->tol_loss = std::stod(value);
      else if (key == "tol-var") o->tol_var = std::stod(value);
      else {
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": bad value for '" + key + "'");
    }
  }
}

symclu::ExperimentSpec to_spec(const Options& o) {
  symclu::ExperimentSpec spec;
  spec.dataset_path = o.dataset;
  spec.format = symclu::format_from_string(o.format);
  spec.config.alpha = o.alpha;
  spec.config.beta = o.beta;
  spec.config.mu = o.mu;
  spec.config.eta_ratio = o.eta_ratio;
  spec.config.rank = o.rank;
  spec.config.max_iter = o.max_iter;
  spec.config.tol_loss = o.tol_loss;
  spec.config.tol_var = o.tol_var;
  spec.config.seed = o.seed;
  spec.config.mode = symclu::mode_from_string(o.mode);
  spec.repetitions = o.reps;
  spec.spectral_reps = o.spectral_reps;
  spec.scale_rank = o.scale_rank;
  spec.grid_alpha = o.grid_alpha;
  spec.grid_beta = o.grid_beta;
  spec.grid_mu = o.grid_mu;
  spec.out_dir = o.out_dir;
  return spec;
}

void write_all(const symclu::ExperimentSpec& spec,
               const symclu::ExperimentResult& result) {
  const std::string& dir = spec.out_dir;
  symclu::write_aggregate_json(dir + "/aggregate.json", spec, result);
  symclu::write_runs_csv(dir + "/runs.csv", result.runs);
  symclu::write_wp_curves_csv(dir + "/wp_curves.csv", result.runs,
                              result.correct_rates);
  symclu::write_loss_trace_csv(dir + "/loss_trace.csv", result.runs);
}

int cmd_fit(const Options& o) {
  symclu::ExperimentSpec spec = to_spec(o);
  spec.repetitions = 1;
  spec.spectral_reps = 1;
  const auto result = symclu::run_experiment(spec);
  write_all(spec, result);
  const auto& run = result.runs.front();
  std::cout << "fit: " << run.iterations << " iterations, exit "
            << symclu::exit_reason_name(run.exit_reason) << ", final loss "
            << run.final_loss << "\n";
  return 0;
}

int cmd_cluster(const Options& o) {
  symclu::ExperimentSpec spec = to_spec(o);
  const auto data = symclu::load_dataset(spec.dataset_path, spec.format);
  spec.repetitions = 1;
  spec.spectral_reps = 1;
  const auto result = symclu::run_experiment(spec, data);

  // rebuild the first repetition (same derived seeds) to emit its labels
  const auto slices =
      symclu::build_slices(symclu::self_tuning_kernel(data, spec.scale_rank));
  const symclu::SolverConfig cfg = result.runs.front().config;
  const auto state = symclu::fit(slices, cfg);
  const auto z = symclu::augment(state.s, state.d, state.v);
  const auto assign = symclu::spectral_cluster(
      z, result.resolved_rank, symclu::derive_seed(cfg.seed, 1));

  std::filesystem::create_directories(spec.out_dir);
  std::ofstream labels(spec.out_dir + "/labels.csv");
  labels << "index,label\n";
  for (int i = 0; i < assign.labels.size(); ++i) {
    labels << i << ',' << assign.labels[i] << '\n';
  }
  write_all(spec, result);
  std::cout << "cluster: wrote " << assign.labels.size() << " labels to "
            << spec.out_dir << "/labels.csv\n";
  return 0;
}

int cmd_eval(const Options& o) {
  const symclu::ExperimentSpec spec = to_spec(o);
  const auto data = symclu::load_dataset(spec.dataset_path, spec.format);
  if (!data.labels) {
    throw std::invalid_argument("eval requires a labeled dataset");
  }
  const auto result = symclu::run_experiment(spec, data);
  write_all(spec, result);
  std::cout << "eval: ACC " << result.aggregate.acc_mean << " +- "
            << result.aggregate.acc_std << ", NMI "
            << result.aggregate.nmi_mean << " +- " << result.aggregate.nmi_std
            << " over " << result.aggregate.runs << " runs\n";
  return 0;
}

int cmd_ablate(const Options& o) {
  const symclu::ExperimentSpec spec = to_spec(o);
  const auto data = symclu::load_dataset(spec.dataset_path, spec.format);
  if (!data.labels) {
    throw std::invalid_argument("ablate requires a labeled dataset");
  }
  const auto rows = symclu::run_ablation(spec, data);
  symclu::write_ablation_json(spec.out_dir + "/aggregate.json", spec, rows);
  std::vector<symclu::RunRecord> all_runs;
  for (const auto& [mode, result] : rows) {
    all_runs.insert(all_runs.end(), result.runs.begin(), result.runs.end());
  }
  symclu::write_runs_csv(spec.out_dir + "/runs.csv", all_runs);
  for (const auto& [mode, result] : rows) {
    std::cout << symclu::mode_name(mode) << ": ACC "
              << result.aggregate.acc_mean << " +- "
              << result.aggregate.acc_std << ", NMI "
              << result.aggregate.nmi_mean << "\n";
  }
  return 0;
}

int cmd_grid(const Options& o) {
  const symclu::ExperimentSpec spec = to_spec(o);
  const auto data = symclu::load_dataset(spec.dataset_path, spec.format);
  if (!data.labels) {
    throw std::invalid_argument("grid requires a labeled dataset");
  }
  const auto cells = symclu::run_grid(spec, data);
  symclu::write_grid_json(spec.out_dir + "/aggregate.json", spec, cells);
  std::vector<symclu::RunRecord> all_runs;
  for (const auto& cell : cells) {
    all_runs.insert(all_runs.end(), cell.result.runs.begin(),
                    cell.result.runs.end());
  }
  symclu::write_runs_csv(spec.out_dir + "/runs.csv", all_runs);
  std::cout << "grid: " << cells.size() << " cells -> " << spec.out_dir
            << "/aggregate.json\n";
  return 0;
}

int cmd_curves(const Options& o) {
  symclu::ExperimentSpec spec = to_spec(o);
  const auto data = symclu::load_dataset(spec.dataset_path, spec.format);
  if (!data.labels) {
    throw std::invalid_argument("curves requires a labeled dataset");
  }
  spec.repetitions = 1;
  spec.spectral_reps = 1;
  const auto result = symclu::run_experiment(spec, data);
  symclu::write_wp_curves_csv(spec.out_dir + "/wp_curves.csv", result.runs,
                              result.correct_rates);
  symclu::write_loss_trace_csv(spec.out_dir + "/loss_trace.csv", result.runs);
  std::cout << "curves: wrote " << spec.out_dir << "/wp_curves.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted neighbor-slice SymNMF clustering"};
  app.require_subcommand(1);

  Options o;
  auto* fit = app.add_subcommand("fit", "run one solver fit, emit traces");
  auto* cluster = app.add_subcommand("cluster", "fit and emit labels");
  auto* eval = app.add_subcommand("eval", "repeated fits with ACC/NMI");
  auto* ablate = app.add_subcommand("ablate", "compare model variants");
  auto* grid = app.add_subcommand("grid", "sweep alpha/beta/mu grids");
  auto* curves = app.add_subcommand("curves", "emit w/p/correct-rate curves");
  for (auto* cmd : {fit, cluster, eval, ablate, grid, curves}) {
    add_common(cmd, &o);
  }
  grid->add_option("--grid-alpha", o.grid_alpha, "alpha grid values")
      ->delimiter(',');
  grid->add_option("--grid-beta", o.grid_beta, "beta grid values")
      ->delimiter(',');
  grid->add_option("--grid-mu", o.grid_mu, "mu grid values")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* cmd : {fit, cluster, eval, ablate, grid, curves}) {
      if (cmd->parsed()) apply_config_file(*cmd, &o);
    }
    if (fit->parsed()) return cmd_fit(o);
    if (cluster->parsed()) return cmd_cluster(o);
    if (eval->parsed()) return cmd_eval(o);
    if (ablate->parsed()) return cmd_ablate(o);
    if (grid->parsed()) return cmd_grid(o);
    if (curves->parsed()) return cmd_curves(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
