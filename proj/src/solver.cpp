#include "symclu/solver.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "symclu/factor.hpp"
#include "symclu/random.hpp"

namespace symclu {

namespace {

constexpr int kWarmStartSweeps = 200;
constexpr double kWarmStartTol = 1e-4;

double safe_ratio(double num, double den) {
  return num / std::max(den, 1e-30);
}

// <A, VV'> over the nonzeros of A, column-blocked for cache locality.
double sparse_quadratic(const SparseGraph& a, const Eigen::MatrixXd& v) {
  double total = 0.0;
  for (int t = 0; t < v.cols(); ++t) {
    const double* col = v.col(t).data();
    for (int row = 0; row < a.outerSize(); ++row) {
      for (SparseGraph::InnerIterator it(a, row); it; ++it) {
        total += it.value() * col[it.row()] * col[it.col()];
      }
    }
  }
  return total;
}

// The rank-one stationarity map needs the symmetric part of the target;
// the raw combined graphs are row-asymmetric.
SparseGraph symmetrized(const SparseGraph& a) {
  const SparseGraph at(a.transpose());
  return SparseGraph(0.5 * (a + at));
}

bool uses_wp(Mode mode) {
  return mode == Mode::kFull || mode == Mode::kNoOrth;
}

bool uses_w_only(Mode mode) {
  return mode == Mode::kNoDissim || mode == Mode::kPlain;
}

double effective_alpha(const SolverConfig& config) {
  const bool drop = config.mode == Mode::kNoOrth || config.mode == Mode::kPlain;
  return drop ? 0.0 : config.alpha;
}

double effective_beta(const SolverConfig& config) {
  return config.mode == Mode::kFull || config.mode == Mode::kNoOrth
             ? config.beta
             : 0.0;
}

}  // namespace

Mode mode_from_string(const std::string& name) {
  if (name == "full") return Mode::kFull;
  if (name == "no_orth") return Mode::kNoOrth;
  if (name == "no_dissim") return Mode::kNoDissim;
  if (name == "plain") return Mode::kPlain;
  if (name == "ao_symnmf") return Mode::kAoSymnmf;
  throw std::invalid_argument("unknown mode: " + name);
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::kFull: return "full";
    case Mode::kNoOrth: return "no_orth";
    case Mode::kNoDissim: return "no_dissim";
    case Mode::kPlain: return "plain";
    case Mode::kAoSymnmf: return "ao_symnmf";
  }
  throw std::logic_error("unreachable");
}

std::vector<Mode> all_modes() {
  return {Mode::kFull, Mode::kNoOrth, Mode::kNoDissim, Mode::kPlain,
          Mode::kAoSymnmf};
}

void SolverConfig::validate() const {
  if (alpha < 0.0 || beta < 0.0) {
    throw std::invalid_argument("SolverConfig: alpha and beta must be >= 0");
  }
  if (!(mu > 0.0)) {
    throw std::invalid_argument("SolverConfig: mu must be positive");
  }
  if (!(eta_ratio > 0.0 && eta_ratio < 1.0)) {
    throw std::invalid_argument("SolverConfig: eta_ratio must lie in (0, 1)");
  }
  if (rank < 1) throw std::invalid_argument("SolverConfig: rank must be >= 1");
  if (max_iter < 1) {
    throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
  }
  if (tol_loss < 0.0 || tol_var < 0.0) {
    throw std::invalid_argument("SolverConfig: tolerances must be >= 0");
  }
}

std::string exit_reason_name(ExitReason reason) {
  switch (reason) {
    case ExitReason::kMaxIter: return "max_iter";
    case ExitReason::kLossTol: return "loss_tol";
    case ExitReason::kVarTol: return "var_tol";
  }
  throw std::logic_error("unreachable");
}

Eigen::VectorXd slice_scores(const NeighborSlices& slices,
                             const Eigen::MatrixXd& v) {
  const int kk = slices.count();
  const int n = slices.n;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(kk);
  for (int t = 0; t < v.cols(); ++t) {
    const double* col = v.col(t).data();
    for (int k = 0; k < kk; ++k) {
      const auto& cols_k = slices.cols[k];
      const auto& vals_k = slices.vals[k];
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += vals_k[i] * col[i] * col[cols_k[i]];
      c[k] += acc;
    }
  }
  return c;
}

SolverState initialize(const NeighborSlices& slices,
                       const SolverConfig& config) {
  config.validate();
  const int n = slices.n;
  const int kk = slices.count();
  if (config.rank > n) {
    throw std::invalid_argument("initialize: rank exceeds sample count");
  }
  const int k0 = std::bit_width(static_cast<unsigned>(n));  // floor(log2 n)+1
  if (n - 1 <= k0) {
    throw std::invalid_argument(
        "initialize: too few samples, no slices left for the dissimilarity "
        "weights");
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(kk);
  w.head(k0).setConstant(1.0 / k0);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(kk);
  p.tail(kk - k0).setConstant(1.0 / (kk - k0));

  Rng rng(config.seed);
  Eigen::MatrixXd v(n, config.rank);
  for (int j = 0; j < config.rank; ++j) {
    for (int i = 0; i < n; ++i) v(i, j) = rng.uniform();
  }

  SolverState state;
  state.k0 = k0;
  state.w = SimplexWeights(w);
  state.p = SimplexWeights(p);
  state.s = combine(slices, w);
  state.d = combine(slices, p);

  // warm start: plain rank-one sweeps on S(w) alone
  const SparseGraph empty(n, n);
  const SparseGraph s_sym = symmetrized(state.s);
  for (int sweep = 0; sweep < kWarmStartSweeps; ++sweep) {
    const Eigen::MatrixXd prev = v;
    for (int j = 0; j < config.rank; ++j) {
      const ColumnContext ctx = make_column_context(v, j);
      const auto mv = [&](const Eigen::VectorXd& x) {
        return m_times_v(x, s_sym, empty, ctx, 0.0, 0.0);
      };
      v.col(j) = rank_one_update(v.col(j), mv).v;
    }
    if (safe_ratio((v - prev).norm(), prev.norm()) <= kWarmStartTol) break;
  }
  state.v = v;
  return state;
}

double monitored_objective(const SolverState& state,
                           const SolverConfig& config) {
  const double w_sq = state.w.coeffs().squaredNorm();
  const double sv = sparse_quadratic(state.s, state.v);
  const double gram_sq = (state.v.transpose() * state.v).squaredNorm();
  const double fit = w_sq - 2.0 * sv + gram_sq;  // |S - VV'|^2

  double obj = 0.5 * fit;
  switch (config.mode) {
    case Mode::kFull:
    case Mode::kNoOrth:
      obj += config.beta * sparse_quadratic(state.d, state.v);
      obj += 0.5 * (config.mu - 1.0) * w_sq;
      obj += 0.5 * config.mu * state.p.coeffs().squaredNorm();
      break;
    case Mode::kNoDissim:
    case Mode::kPlain:
      obj += 0.5 * config.mu * w_sq;
      break;
    case Mode::kAoSymnmf:
      break;
  }

  const double alpha = effective_alpha(config);
  if (alpha > 0.0) {
    double reg = 0.0;
    for (int j = 0; j < state.v.cols(); ++j) {
      reg += orth_reg(state.v.col(j), make_column_context(state.v, j));
    }
    obj -= alpha * reg;
  }
  return obj;
}

SolverState fit(const NeighborSlices& slices, const SolverConfig& config) {
  SolverState state = initialize(slices, config);
  const int n = slices.n;
  const double alpha = effective_alpha(config);
  const double beta = effective_beta(config);
  const double eta = config.eta_ratio * config.mu;
  const SparseGraph empty(n, n);

  // modes without a dissimilarity graph drop D entirely
  if (!uses_wp(config.mode)) state.d = empty;

  double loss_prev = monitored_objective(state, config);
  state.loss_trace.push_back(loss_prev);
  state.exit_reason = ExitReason::kMaxIter;

  SparseGraph s_sym = symmetrized(state.s);
  SparseGraph d_sym = symmetrized(state.d);

  for (int b = 1; b <= config.max_iter; ++b) {
    const auto tic = std::chrono::steady_clock::now();
    const Eigen::MatrixXd v_prev = state.v;
    const Eigen::VectorXd w_prev = state.w.coeffs();
    const Eigen::VectorXd p_prev = state.p.coeffs();

    std::vector<double> residuals(config.rank, 0.0);
    for (int j = 0; j < config.rank; ++j) {
      const ColumnContext ctx = make_column_context(state.v, j);
      const auto mv = [&](const Eigen::VectorXd& x) {
        return m_times_v(x, s_sym, d_sym, ctx, alpha, beta);
      };
      const RankOneStep step = rank_one_update(state.v.col(j), mv);
      state.v.col(j) = step.v;
      residuals[j] = step.d_norm;
    }
    state.kkt_residuals.push_back(std::move(residuals));

    if (uses_wp(config.mode)) {
      WpSubproblem prob;
      prob.c = slice_scores(slices, state.v);
      prob.mu = config.mu;
      prob.beta = config.beta;
      prob.eta = eta;
      const WpSolution sol = solve_wp(prob, state.w, state.p);
      state.w = sol.w;
      state.p = sol.p;
      state.coupled = sol.coupled;
      state.s = combine(slices, state.w.coeffs());
      state.d = combine(slices, state.p.coeffs());
      s_sym = symmetrized(state.s);
      d_sym = symmetrized(state.d);
    } else if (uses_w_only(config.mode)) {
      const Eigen::VectorXd c = slice_scores(slices, state.v);
      state.w = project_simplex(c / (1.0 + config.mu));
      state.s = combine(slices, state.w.coeffs());
      s_sym = symmetrized(state.s);
    }
    // ao_symnmf: S stays frozen at the initial graph

    const double loss = monitored_objective(state, config);
    if (!std::isfinite(loss)) {
      throw std::runtime_error(
          "fit: non-finite loss at iteration " + std::to_string(b) +
          " (|V| = " + std::to_string(state.v.norm()) + ")");
    }
    const double delta =
        safe_ratio((state.v - v_prev).norm(), v_prev.norm()) +
        safe_ratio((state.w.coeffs() - w_prev).norm(), w_prev.norm()) +
        safe_ratio((state.p.coeffs() - p_prev).norm(), p_prev.norm());

    state.loss_trace.push_back(loss);
    state.delta_trace.push_back(delta);
    state.iterations = b;
    state.iteration_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tic)
            .count());

    const double rel = safe_ratio(std::abs(loss_prev - loss),
                                  std::abs(loss_prev));
    loss_prev = loss;
    if (rel <= config.tol_loss) {
      state.exit_reason = ExitReason::kLossTol;
      break;
    }
    if (delta <= config.tol_var) {
      state.exit_reason = ExitReason::kVarTol;
      break;
    }
  }

  // residual of the stationarity map at the exit point, columns untouched
  state.final_kkt.assign(config.rank, 0.0);
  for (int j = 0; j < config.rank; ++j) {
    const ColumnContext ctx = make_column_context(state.v, j);
    const auto mv = [&](const Eigen::VectorXd& x) {
      return m_times_v(x, s_sym, d_sym, ctx, alpha, beta);
    };
    state.final_kkt[j] = rank_one_update(state.v.col(j), mv).d_norm;
  }
  return state;
}

}  // namespace symclu
