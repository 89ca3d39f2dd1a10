#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cstdint>
#include <string>
#include <vector>

#include "model.hpp"

namespace hrom {

struct TimeMesh {
  double t_final = 0.0;
  std::int64_t steps = 0;

  double dt() const { return t_final / static_cast<double>(steps); }

  static TimeMesh with_steps(double t_final, std::int64_t steps);
  // Rounds t_final/dt to the nearest integer step count (must be within 1e-8 relative).
  static TimeMesh with_dt(double t_final, double dt);
};

struct KahanOptions {
  double cond_threshold = 1e12;
  int cond_check_stride = 16;  // estimate condition every k-th step; <=0 disables
};

// Interface for Kahan stepping with dense linear algebra (reduced systems, toys).
class DenseQuadraticSystem {
public:
  virtual ~DenseQuadraticSystem() = default;
  virtual int dim() const = 0;
  virtual void rhs(const Eigen::VectorXd& q, Eigen::VectorXd& out) const = 0;
  virtual void jacobian(const Eigen::VectorXd& q, Eigen::MatrixXd& out) const = 0;
};

// Structure access for the polarized one-leg form:
//   (q+ - q)/dt = Bq Qt(q, q+) + 1/2 Bl (q + q+),
// with Qt(a,b) = (Q(a+b) - Q(a) - Q(b))/2 the polarization of the quadratic part.
class PolarizedSystem {
public:
  virtual ~PolarizedSystem() = default;
  virtual int dim() const = 0;
  virtual void linear_rhs(const Eigen::VectorXd& q, Eigen::VectorXd& out) const = 0;
  virtual void quadratic_polarized(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                   Eigen::VectorXd& out) const = 0;
};

// One Kahan step: solve (I - dt/2 f'(q)) u = dt f(q), return q + u.
// Exactly one linear solve; no nonlinear iteration.
Eigen::VectorXd kahan_step(const DenseQuadraticSystem& sys, const Eigen::VectorXd& q, double dt,
                           const KahanOptions& opt = {});

// Fixed-point solve of the polarized form; serves as an independent oracle for
// kahan_step (identical for quadratic vector fields).
Eigen::VectorXd kahan_step_polarized(const PolarizedSystem& sys, const Eigen::VectorXd& q,
                                     double dt, double tol = 1e-14, int max_iter = 1000);

// Sparse-direct Kahan stepper for full-order models. The Jacobian pattern is
// analyzed once; per step only the diag(q)-scaled entries are refreshed before
// refactorizing.
class FomKahanStepper {
public:
  FomKahanStepper(const SkewGradientModel& model, double dt, const KahanOptions& opt = {});

  // Advances q in place and returns the update u = q_next - q_prev
  // (valid until the next call).
  const Eigen::VectorXd& step(Eigen::VectorXd& q);

  // Solves for the Kahan update at q without advancing (modified-Hamiltonian
  // evaluations reuse the factorization machinery this way).
  const Eigen::VectorXd& update_at(const Eigen::VectorXd& q);

  double last_condition_estimate() const { return cond_; }
  std::int64_t steps_taken() const { return steps_; }

private:
  void refresh_values(const Eigen::VectorXd& q);
  double norm1() const;

  const SkewGradientModel& model_;
  double dt_;
  KahanOptions opt_;

  Eigen::SparseMatrix<double> A_;  // column-major for SparseLU
  std::vector<double> static_values_;
  struct DynEntry {
    Eigen::Index value_pos;
    double factor;       // -dt/2 * coeff * S entry
    Eigen::Index q_index;
  };
  std::vector<DynEntry> dyn_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  Eigen::VectorXd f_, u_, probe_;
  double cond_ = 0.0;
  std::int64_t steps_ = 0;
};

// Dense Kahan stepper (reduced systems); same contract as FomKahanStepper.
class DenseKahanStepper {
public:
  DenseKahanStepper(const DenseQuadraticSystem& sys, double dt, const KahanOptions& opt = {});
  const Eigen::VectorXd& step(Eigen::VectorXd& q);
  double last_condition_estimate() const { return cond_; }

private:
  const DenseQuadraticSystem& sys_;
  double dt_;
  KahanOptions opt_;
  Eigen::MatrixXd J_, A_;
  Eigen::VectorXd f_, u_;
  double cond_ = 0.0;
  std::int64_t steps_ = 0;
};

// Sampled states of one integration. Column 0 is the initial state; the POD
// snapshot block excludes it by default.
class Trajectory {
public:
  Trajectory() = default;
  Trajectory(int dim, std::int64_t samples, double dt, std::int64_t stride);

  int dim() const { return static_cast<int>(states_.rows()); }
  std::int64_t samples() const { return static_cast<std::int64_t>(states_.cols()); }
  double dt() const { return dt_; }
  std::int64_t stride() const { return stride_; }

  Eigen::MatrixXd& states() { return states_; }
  const Eigen::MatrixXd& states() const { return states_; }
  const std::vector<double>& times() const { return times_; }
  void set_time(std::int64_t k, double t) { times_[static_cast<size_t>(k)] = t; }

  // Snapshot matrix for POD: columns q^1..q^K (optionally including q^0).
  Eigen::Ref<const Eigen::MatrixXd> snapshot_block(bool include_initial = false) const;

  bool has_invariants() const { return invariants_.size() > 0; }
  const Eigen::MatrixXd& invariant_series() const { return invariants_; }
  const std::vector<std::string>& invariant_names() const { return invariant_names_; }
  void set_invariants(std::vector<std::string> names, Eigen::MatrixXd series);

private:
  Eigen::MatrixXd states_;
  std::vector<double> times_;
  double dt_ = 0.0;
  std::int64_t stride_ = 1;
  Eigen::MatrixXd invariants_;  // rows = channels, cols = samples
  std::vector<std::string> invariant_names_;
};

struct IntegrateOptions {
  std::int64_t sample_stride = 1;
  bool record_invariants = false;
  bool record_modified_hamiltonian = false;
  KahanOptions kahan{};
};

Trajectory integrate(const SkewGradientModel& model, const Eigen::VectorXd& q0,
                     const TimeMesh& mesh, const IntegrateOptions& opt = {});

// Kahan's conserved quantity for cubic Hamiltonians with constant skew S:
//   Ht(q) = H(q) + dt/3 <gradH(q), (I - dt/2 f'(q))^{-1} f(q)>_w
// with the mesh-weighted pairing <a,b>_w = w * a.b. Constant along Kahan
// trajectories up to roundoff.
double modified_hamiltonian(const SkewGradientModel& model, const Eigen::VectorXd& q, double dt);

}  // namespace hrom
