#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rom.hpp"

namespace hrom {

struct ErrorReport {
  std::vector<double> times;
  std::vector<double> rel_l2;  // per sampled step
  double rel_l2_mean = 0.0;
  struct InvariantError {
    std::string name;
    std::vector<double> abs_err;
    double mean = 0.0;
  };
  std::vector<InvariantError> invariants;
};

// Time-averaged relative L2 error (mesh-weighted norm) of the lifted reduced
// trajectory against the full one, plus absolute invariant errors.
// The initial column is excluded by default (the average runs over q^1..q^Nt).
ErrorReport compare_trajectories(const SkewGradientModel& model, const Trajectory& fom,
                                 const Trajectory& reduced, const Basis& basis,
                                 bool include_initial = false);

// Same metric for two same-dimension state matrices (columns = samples).
double relative_l2_mean(const Eigen::Ref<const Eigen::MatrixXd>& full,
                        const Eigen::Ref<const Eigen::MatrixXd>& approx, double weight);

// Mesh-weighted relative L2 distance of two states.
double relative_l2_state(const Eigen::Ref<const Eigen::VectorXd>& reference,
                         const Eigen::Ref<const Eigen::VectorXd>& candidate, double weight);

// Experimental orders of convergence from (h, error) pairs; consecutive h must
// halve. Returns one order per refinement.
std::vector<double> eoc(const std::vector<std::pair<double, double>>& level_errors);

struct BenchReport {
  int dim = 0;
  int modes = 0;
  std::int64_t steps = 0;
  int repetitions = 0;
  double fom_s = 0.0;
  double basis_s = 0.0;
  double reduce_linear_s = 0.0;   // S_hat and L_hat projections only
  double reduce_tensor_s = 0.0;   // full reduction including the W terms
  // Online times normalized to `steps` Kahan steps each. The tensorial path is
  // timed over a longer run (tensorial_timing_steps) and rescaled: per-call
  // cost is N-independent and a fraction of a millisecond, so the longer run
  // buys signal-to-noise.
  double online_tensorial_s = 0.0;
  double online_lifted_s = 0.0;
  std::int64_t tensorial_timing_steps = 0;
  double offline_pod_s() const { return basis_s + reduce_linear_s; }
  double offline_tpod_s() const { return basis_s + reduce_tensor_s; }
  double speedup_tensorial() const { return fom_s / online_tensorial_s; }
  double speedup_lifted() const { return fom_s / online_lifted_s; }
};

// Times the FOM solve, the offline stage and both online paths.
// Median of `reps` repetitions after one warmup run, monotonic clock,
// sequential execution.
BenchReport benchmark_pipeline(const SkewGradientModel& model, const Eigen::VectorXd& q0,
                               const TimeMesh& mesh, int n_modes, const RsvdOptions& rsvd,
                               int reps = 3);

}  // namespace hrom
