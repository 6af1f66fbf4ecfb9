#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "symclu/graph.hpp"
#include "symclu/simplex.hpp"

namespace symclu {

/// Model variants. full learns (V, w, p) jointly; no_orth drops the
/// orthogonality term; no_dissim drops the dissimilarity graph (the density
/// penalty then reads mu/2 |S|^2); plain drops both; ao_symnmf keeps the
/// initial similarity graph fixed and learns V only.
enum class Mode { kFull, kNoOrth, kNoDissim, kPlain, kAoSymnmf };

Mode mode_from_string(const std::string& name);
std::string mode_name(Mode mode);
std::vector<Mode> all_modes();

struct SolverConfig {
  double alpha = 0.1;       // orthogonality weight, >= 0
  double beta = 10.0;       // dissimilarity weight, >= 0
  double mu = 0.1;          // density weight, > 0
  double eta_ratio = 0.99;  // coupling penalty as a fraction of mu, in (0,1)
  int rank = 2;             // cluster count r
  int max_iter = 1000;
  double tol_loss = 1e-4;   // relative loss change
  double tol_var = 1e-4;    // relative variable change
  std::uint64_t seed = 0;
  Mode mode = Mode::kFull;

  void validate() const;
};

enum class ExitReason { kMaxIter, kLossTol, kVarTol };
std::string exit_reason_name(ExitReason reason);

struct SolverState {
  Eigen::MatrixXd v;  // n x r nonnegative factor
  SimplexWeights w;
  SimplexWeights p;
  SparseGraph s;
  SparseGraph d;
  std::vector<double> loss_trace;   // [0] is the value at the initial point
  std::vector<double> delta_trace;  // relative variable change per iteration
  std::vector<std::vector<double>> kkt_residuals;  // per iteration, per column
  std::vector<double> final_kkt;  // per-column d_norm at the exit point
  std::vector<double> iteration_seconds;
  bool coupled = false;
  int iterations = 0;
  ExitReason exit_reason = ExitReason::kMaxIter;
  int k0 = 0;
};

/// Sets k0 = floor(log2 n) + 1, spreads w over the first k0 slices and p
/// over the remaining ones, draws V uniformly in [0,1] from the seed and
/// refines it by rank-one sweeps on S(w) alone (30 sweeps, or until the
/// relative change drops below 1e-3).
SolverState initialize(const NeighborSlices& slices,
                       const SolverConfig& config);

/// Objective monitored during fit, evaluated through the sparse identities
/// |S(w)|^2 = sum w_k^2 and <S, VV'> over the slice supports so the cost
/// stays O(n^2 r). The orthogonality sum is a per-column surrogate: it is
/// recomputed at the current V since the regularizer exists only
/// column-wise.
double monitored_objective(const SolverState& state,
                           const SolverConfig& config);

/// Per-slice scores c_k = <A(k), VV'>, evaluated over the slice supports.
Eigen::VectorXd slice_scores(const NeighborSlices& slices,
                             const Eigen::MatrixXd& v);

/// Alternating solver: sequential rank-one column updates, then the (w, p)
/// (or w-only) weight solve, then graph reassembly, until the loss or the
/// variables stop moving or max_iter is hit.
SolverState fit(const NeighborSlices& slices, const SolverConfig& config);

}  // namespace symclu
