#include "integrator.hpp"

#include <Eigen/LU>
#include <cmath>

namespace hrom {

TimeMesh TimeMesh::with_steps(double t_final, std::int64_t steps) {
  if (steps < 0) fail(ErrorCode::config, "time mesh: negative step count");
  if (steps > 0 && !(t_final > 0.0))
    fail(ErrorCode::config, "time mesh: final time must be positive");
  return TimeMesh{t_final, steps};
}

TimeMesh TimeMesh::with_dt(double t_final, double dt) {
  if (!(dt > 0.0)) fail(ErrorCode::config, "time mesh: dt must be positive");
  const double raw = t_final / dt;
  const auto steps = static_cast<std::int64_t>(std::llround(raw));
  if (steps < 1 || std::abs(raw - static_cast<double>(steps)) > 1e-8 * raw)
    fail(ErrorCode::config, "time mesh: dt must divide the final time");
  return with_steps(t_final, steps);
}

Eigen::VectorXd kahan_step(const DenseQuadraticSystem& sys, const Eigen::VectorXd& q, double dt,
                           const KahanOptions& opt) {
  const int n = sys.dim();
  if (q.size() != n) fail(ErrorCode::invalid_argument, "kahan_step: dimension mismatch");
  Eigen::MatrixXd J(n, n);
  sys.jacobian(q, J);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - 0.5 * dt * J;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  if (opt.cond_check_stride > 0) {
    const double rcond = lu.rcond();
    if (!(rcond > 1.0 / opt.cond_threshold))
      fail(ErrorCode::numeric, "kahan_step: ill-conditioned linear system (rcond " +
                                   std::to_string(rcond) + ")");
  }
  Eigen::VectorXd f(n);
  sys.rhs(q, f);
  Eigen::VectorXd u = lu.solve(dt * f);
  if (!u.allFinite()) fail(ErrorCode::numeric, "kahan_step: non-finite update");
  return q + u;
}

Eigen::VectorXd kahan_step_polarized(const PolarizedSystem& sys, const Eigen::VectorXd& q,
                                     double dt, double tol, int max_iter) {
  const int n = sys.dim();
  if (q.size() != n) fail(ErrorCode::invalid_argument, "kahan_step_polarized: dimension mismatch");
  Eigen::VectorXd w = q, wnew(n), lin(n), quad(n);
  for (int it = 0; it < max_iter; ++it) {
    sys.linear_rhs(q + w, lin);
    sys.quadratic_polarized(q, w, quad);
    wnew = q + dt * (quad + 0.5 * lin);
    const double delta = (wnew - w).norm();
    w = wnew;
    if (delta <= tol * std::max(1.0, w.norm())) return w;
  }
  fail(ErrorCode::numeric, "kahan_step_polarized: fixed-point iteration did not converge");
}

// --- FOM stepper --------------------------------------------------------------

namespace {

Eigen::Index find_entry(const Eigen::SparseMatrix<double>& A, Eigen::Index row, Eigen::Index col) {
  const auto* outer = A.outerIndexPtr();
  const auto* inner = A.innerIndexPtr();
  for (Eigen::Index p = outer[col]; p < outer[col + 1]; ++p)
    if (inner[p] == row) return p;
  fail(ErrorCode::internal, "Kahan workspace: missing pattern entry");
}

}  // namespace

FomKahanStepper::FomKahanStepper(const SkewGradientModel& model, double dt, const KahanOptions& opt)
    : model_(model), dt_(dt), opt_(opt) {
  const Eigen::Index n = model.dim();
  const auto& layout = model.layout();

  // Static part: I - dt/2 * S * L.
  Eigen::SparseMatrix<double> S = model.skew().matrix();
  Eigen::SparseMatrix<double> L = model.lin_grad().matrix();
  Eigen::SparseMatrix<double> base = Eigen::SparseMatrix<double>(S * L);
  Eigen::SparseMatrix<double> eye(n, n);
  eye.setIdentity();
  base = Eigen::SparseMatrix<double>(eye - (0.5 * dt) * base);

  // Symbolic union with the quadratic-term pattern: column off_a + j also
  // receives the (scaled) column off_out + j of S, and symmetrically for b.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(base.nonZeros()) * 2);
  for (int k = 0; k < base.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(base, k); it; ++it)
      trips.emplace_back(it.row(), it.col(), it.value());

  struct DynSeed {
    Eigen::Index row, col, q_index;
    double factor;
  };
  std::vector<DynSeed> seeds;
  for (const auto& t : model.quad_terms()) {
    const auto& fa = layout.fields[static_cast<size_t>(t.a)];
    const auto& fb = layout.fields[static_cast<size_t>(t.b)];
    const auto& fo = layout.fields[static_cast<size_t>(t.out)];
    for (int j = 0; j < fa.size; ++j) {
      const Eigen::Index scol = fo.offset + j;
      for (Eigen::SparseMatrix<double>::InnerIterator it(S, scol); it; ++it) {
        const double factor = -0.5 * dt * t.coeff * it.value();
        seeds.push_back({it.row(), fa.offset + j, fb.offset + j, factor});
        seeds.push_back({it.row(), fb.offset + j, fa.offset + j, factor});
      }
    }
  }
  for (const auto& s : seeds) trips.emplace_back(s.row, s.col, 0.0);

  A_.resize(n, n);
  A_.setFromTriplets(trips.begin(), trips.end());
  A_.makeCompressed();

  static_values_.assign(A_.valuePtr(), A_.valuePtr() + A_.nonZeros());
  dyn_.reserve(seeds.size());
  for (const auto& s : seeds) dyn_.push_back({find_entry(A_, s.row, s.col), s.factor, s.q_index});

  lu_.analyzePattern(A_);
  f_.resize(n);
  u_.resize(n);
  probe_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) probe_[i] = (i % 2 == 0) ? 1.0 : -1.0;
}

void FomKahanStepper::refresh_values(const Eigen::VectorXd& q) {
  std::copy(static_values_.begin(), static_values_.end(), A_.valuePtr());
  double* vals = A_.valuePtr();
  for (const auto& d : dyn_) vals[d.value_pos] += d.factor * q[d.q_index];
}

double FomKahanStepper::norm1() const {
  double mx = 0.0;
  const auto* outer = A_.outerIndexPtr();
  const double* vals = A_.valuePtr();
  for (Eigen::Index c = 0; c < A_.outerSize(); ++c) {
    double s = 0.0;
    for (Eigen::Index p = outer[c]; p < outer[c + 1]; ++p) s += std::abs(vals[p]);
    mx = std::max(mx, s);
  }
  return mx;
}

const Eigen::VectorXd& FomKahanStepper::update_at(const Eigen::VectorXd& q) {
  if (q.size() != model_.dim()) fail(ErrorCode::invalid_argument, "step: dimension mismatch");
  refresh_values(q);
  lu_.factorize(A_);
  if (lu_.info() != Eigen::Success)
    fail(ErrorCode::numeric, "Kahan step " + std::to_string(steps_) + ": singular linear system");

  if (opt_.cond_check_stride > 0 && steps_ % opt_.cond_check_stride == 0) {
    const Eigen::VectorXd z = lu_.solve(probe_);
    cond_ = norm1() * z.template lpNorm<1>() / probe_.template lpNorm<1>();
    if (cond_ > opt_.cond_threshold)
      fail(ErrorCode::numeric, "Kahan step " + std::to_string(steps_) +
                                   ": condition estimate " + std::to_string(cond_) +
                                   " exceeds threshold");
  }

  model_.rhs(q, f_);
  u_ = lu_.solve(dt_ * f_);
  if (!u_.allFinite())
    fail(ErrorCode::numeric, "Kahan step " + std::to_string(steps_) + ": non-finite update");
  return u_;
}

const Eigen::VectorXd& FomKahanStepper::step(Eigen::VectorXd& q) {
  const Eigen::VectorXd& u = update_at(q);
  q += u;
  ++steps_;
  return u;
}

// --- dense stepper -------------------------------------------------------------

DenseKahanStepper::DenseKahanStepper(const DenseQuadraticSystem& sys, double dt,
                                     const KahanOptions& opt)
    : sys_(sys), dt_(dt), opt_(opt) {
  const int n = sys.dim();
  J_.resize(n, n);
  A_.resize(n, n);
  f_.resize(n);
  u_.resize(n);
}

const Eigen::VectorXd& DenseKahanStepper::step(Eigen::VectorXd& q) {
  sys_.jacobian(q, J_);
  A_ = -0.5 * dt_ * J_;
  A_.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A_);
  if (opt_.cond_check_stride > 0 && steps_ % opt_.cond_check_stride == 0) {
    cond_ = 1.0 / std::max(lu.rcond(), 1e-300);
    if (cond_ > opt_.cond_threshold)
      fail(ErrorCode::numeric, "Kahan step " + std::to_string(steps_) +
                                   ": condition estimate " + std::to_string(cond_) +
                                   " exceeds threshold");
  }
  sys_.rhs(q, f_);
  u_ = lu.solve(dt_ * f_);
  if (!u_.allFinite())
    fail(ErrorCode::numeric, "Kahan step " + std::to_string(steps_) + ": non-finite update");
  q += u_;
  ++steps_;
  return u_;
}

// --- trajectory ----------------------------------------------------------------

Trajectory::Trajectory(int dim, std::int64_t samples, double dt, std::int64_t stride)
    : states_(dim, samples), times_(static_cast<size_t>(samples), 0.0), dt_(dt), stride_(stride) {}

Eigen::Ref<const Eigen::MatrixXd> Trajectory::snapshot_block(bool include_initial) const {
  if (include_initial) return states_;
  return states_.rightCols(states_.cols() - 1);
}

void Trajectory::set_invariants(std::vector<std::string> names, Eigen::MatrixXd series) {
  if (series.rows() != static_cast<Eigen::Index>(names.size()) || series.cols() != states_.cols())
    fail(ErrorCode::internal, "invariant series shape mismatch");
  invariant_names_ = std::move(names);
  invariants_ = std::move(series);
}

// --- integrate -----------------------------------------------------------------

Trajectory integrate(const SkewGradientModel& model, const Eigen::VectorXd& q0,
                     const TimeMesh& mesh, const IntegrateOptions& opt) {
  if (q0.size() != model.dim()) fail(ErrorCode::invalid_argument, "integrate: initial state dimension mismatch");
  if (mesh.steps == 0) {
    // No steps: the trajectory is just the initial state.
    Trajectory traj(model.dim(), 1, 0.0, 1);
    traj.states().col(0) = q0;
    traj.set_time(0, 0.0);
    if (opt.record_invariants) {
      const auto vals = model.invariants(q0).values();
      Eigen::MatrixXd series(static_cast<Eigen::Index>(vals.size()), 1);
      for (size_t i = 0; i < vals.size(); ++i) series(static_cast<Eigen::Index>(i), 0) = vals[i];
      traj.set_invariants(model.invariant_names(), std::move(series));
    }
    return traj;
  }
  const std::int64_t nt = mesh.steps;
  const std::int64_t stride = std::max<std::int64_t>(1, opt.sample_stride);
  const double dt = mesh.dt();

  std::vector<std::int64_t> sample_steps;
  for (std::int64_t k = 0; k <= nt; k += stride) sample_steps.push_back(k);
  if (sample_steps.back() != nt) sample_steps.push_back(nt);

  Trajectory traj(model.dim(), static_cast<std::int64_t>(sample_steps.size()), dt, stride);

  std::vector<std::string> inv_names;
  Eigen::MatrixXd inv_series;
  const bool record = opt.record_invariants || opt.record_modified_hamiltonian;
  if (record) {
    inv_names = model.invariant_names();
    if (opt.record_modified_hamiltonian) inv_names.push_back("H_mod");
    inv_series.resize(static_cast<Eigen::Index>(inv_names.size()), traj.samples());
  }

  FomKahanStepper stepper(model, dt, opt.kahan);
  Eigen::VectorXd q = q0;
  std::size_t next_sample = 0;
  const bool want_hmod = opt.record_modified_hamiltonian;
  const Eigen::Index hmod_row = want_hmod ? inv_series.rows() - 1 : 0;

  auto record_sample = [&](std::int64_t k) {
    traj.states().col(static_cast<Eigen::Index>(next_sample)) = q;
    traj.set_time(static_cast<std::int64_t>(next_sample), static_cast<double>(k) * dt);
    if (record) {
      const auto vals = model.invariants(q).values();
      for (size_t i = 0; i < vals.size(); ++i)
        inv_series(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(next_sample)) = vals[i];
    }
    ++next_sample;
  };

  // Ht at a sampled state is H + w/3 * gradH . u with u the Kahan update from
  // that state, which becomes available one step later; remember the gradient.
  Eigen::VectorXd grad_prev;
  Eigen::Index prev_sample_idx = 0;
  bool prev_sampled = false;

  record_sample(0);
  if (want_hmod) {
    grad_prev = model.gradient(q);
    prev_sampled = true;
    prev_sample_idx = 0;
  }

  for (std::int64_t k = 1; k <= nt; ++k) {
    const Eigen::VectorXd& update = stepper.step(q);
    if (want_hmod && prev_sampled) {
      inv_series(hmod_row, prev_sample_idx) =
          inv_series(0, prev_sample_idx) + model.weight() / 3.0 * grad_prev.dot(update);
      prev_sampled = false;
    }
    if (next_sample < sample_steps.size() && sample_steps[next_sample] == k) {
      prev_sample_idx = static_cast<Eigen::Index>(next_sample);
      record_sample(k);
      if (want_hmod) {
        grad_prev = model.gradient(q);
        prev_sampled = true;
      }
    }
  }

  if (want_hmod) {
    // Final sample: one extra solve at q^{Nt}.
    const Eigen::VectorXd& u = stepper.update_at(q);
    const Eigen::Index last = traj.samples() - 1;
    inv_series(hmod_row, last) = inv_series(0, last) + model.weight() / 3.0 * model.gradient(q).dot(u);
  }
  if (record) traj.set_invariants(std::move(inv_names), std::move(inv_series));
  return traj;
}

double modified_hamiltonian(const SkewGradientModel& model, const Eigen::VectorXd& q, double dt) {
  KahanOptions opt;
  opt.cond_check_stride = 0;
  FomKahanStepper stepper(model, dt, opt);
  const Eigen::VectorXd& u = stepper.update_at(q);  // (I - dt/2 f')^{-1} dt f
  return model.hamiltonian(q) + model.weight() / 3.0 * model.gradient(q).dot(u);
}

}  // namespace hrom
