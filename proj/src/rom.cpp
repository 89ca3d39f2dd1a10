#include "rom.hpp"

#include <Eigen/LU>

namespace hrom {

Eigen::MatrixXd reduced_quadratic_tensor(const Eigen::Ref<const Eigen::MatrixXd>& Va,
                                         const Eigen::Ref<const Eigen::MatrixXd>& Vb) {
  if (Va.rows() != Vb.rows())
    fail(ErrorCode::invalid_argument, "reduced_quadratic_tensor: row count mismatch");
  const Eigen::Index na = Va.cols(), nb = Vb.cols();
  Eigen::MatrixXd C(Va.rows(), na * nb);
  for (Eigen::Index a = 0; a < na; ++a)
    for (Eigen::Index b = 0; b < nb; ++b)
      C.col(a * nb + b) = Va.col(a).cwiseProduct(Vb.col(b));
  return C;
}

ReducedModel reduce(const SkewGradientModel& model, const Basis& basis) {
  if (basis.full_dim() != model.dim())
    fail(ErrorCode::invalid_argument, "reduce: basis dimension does not match the model");

  for (const auto& b : basis.blocks()) {
    const Eigen::MatrixXd gram = b.modes.transpose() * b.modes;
    const double res = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (res > 1e-8)
      fail(ErrorCode::invalid_argument, "reduce: basis block '" + b.field + "' is not orthonormal");
  }

  ReducedModel rm;
  rm.model_ = model;
  rm.basis_ = basis;
  rm.n_ = basis.total_modes();

  // Per-field view of the (block-diagonal) basis.
  const auto& layout = model.layout();
  std::vector<Eigen::MatrixXd> field_modes(layout.fields.size());
  rm.field_map_.resize(layout.fields.size());
  for (size_t fi = 0; fi < layout.fields.size(); ++fi) {
    const auto& f = layout.fields[fi];
    const Basis::Block* match = nullptr;
    for (const auto& b : basis.blocks())
      if (b.full_offset == f.offset && b.modes.rows() == f.size) match = &b;
    if (match) {
      field_modes[fi] = match->modes;
      rm.field_map_[fi] = {f.offset, f.size, match->reduced_offset,
                           static_cast<int>(match->modes.cols())};
    } else if (basis.blocks().size() == 1 && basis.blocks()[0].modes.rows() == model.dim()) {
      field_modes[fi] = basis.blocks()[0].modes.middleRows(f.offset, f.size);
      rm.field_map_[fi] = {f.offset, f.size, 0, basis.total_modes()};
    } else {
      fail(ErrorCode::invalid_argument,
           "reduce: basis block layout does not match field '" + f.name + "'");
    }
  }

  const Eigen::MatrixXd& V = basis.assembled();
  // S_hat = V^T S V; congruence keeps skewness, drop the roundoff asymmetry.
  Eigen::MatrixXd SV = model.skew().apply_columns(V);
  Eigen::MatrixXd s_raw = V.transpose() * SV;
  rm.s_hat_ = 0.5 * (s_raw - s_raw.transpose());
  Eigen::MatrixXd LV = model.lin_grad().apply_columns(V);
  Eigen::MatrixXd l_raw = V.transpose() * LV;
  rm.l_hat_ = 0.5 * (l_raw + l_raw.transpose());

  for (const auto& t : model.quad_terms()) {
    const auto& ma = rm.field_map_[static_cast<size_t>(t.a)];
    const auto& mb = rm.field_map_[static_cast<size_t>(t.b)];
    const auto& mo = rm.field_map_[static_cast<size_t>(t.out)];
    const Eigen::MatrixXd C =
        reduced_quadratic_tensor(field_modes[static_cast<size_t>(t.a)],
                                 field_modes[static_cast<size_t>(t.b)]);
    ReducedModel::TensorTerm term;
    term.w = t.coeff * (field_modes[static_cast<size_t>(t.out)].transpose() * C);
    term.a_off = ma.reduced_offset;
    term.a_n = ma.reduced_size;
    term.b_off = mb.reduced_offset;
    term.b_n = mb.reduced_size;
    term.out_off = mo.reduced_offset;
    term.out_n = mo.reduced_size;
    rm.terms_.push_back(std::move(term));
  }
  return rm;
}

void ReducedModel::gradient(const Eigen::Ref<const Eigen::VectorXd>& qr,
                            Eigen::Ref<Eigen::VectorXd> g) const {
  if (qr.size() != n_) fail(ErrorCode::invalid_argument, "reduced gradient: dimension mismatch");
  g.noalias() = l_hat_ * qr;
  for (const auto& t : terms_) {
    const auto qa = qr.segment(t.a_off, t.a_n);
    const auto qb = qr.segment(t.b_off, t.b_n);
    // w (qa kron qb), contracted block-wise; the Kronecker vector is never formed.
    for (int a = 0; a < t.a_n; ++a)
      g.segment(t.out_off, t.out_n).noalias() += qa[a] * (t.w.middleCols(a * t.b_n, t.b_n) * qb);
  }
}

void ReducedModel::rhs_tensorial(const Eigen::Ref<const Eigen::VectorXd>& qr,
                                 Eigen::Ref<Eigen::VectorXd> out) const {
  Eigen::VectorXd g(n_);
  gradient(qr, g);
  out.noalias() = s_hat_ * g;
}

void ReducedModel::rhs_lifted(const Eigen::Ref<const Eigen::VectorXd>& qr,
                              Eigen::Ref<Eigen::VectorXd> out) const {
  const Eigen::VectorXd q = basis_.lift(qr);
  const Eigen::VectorXd g = model_.gradient(q);
  out.noalias() = s_hat_ * basis_.project(g);
}

void ReducedModel::jacobian_tensorial(const Eigen::Ref<const Eigen::VectorXd>& qr,
                                      Eigen::MatrixXd& out) const {
  if (qr.size() != n_) fail(ErrorCode::invalid_argument, "reduced jacobian: dimension mismatch");
  Eigen::MatrixXd G = l_hat_;
  for (const auto& t : terms_) {
    const auto qa = qr.segment(t.a_off, t.a_n);
    const auto qb = qr.segment(t.b_off, t.b_n);
    for (int a = 0; a < t.a_n; ++a) {
      const auto wa = t.w.middleCols(a * t.b_n, t.b_n);
      G.block(t.out_off, t.a_off + a, t.out_n, 1).noalias() += wa * qb;
      G.block(t.out_off, t.b_off, t.out_n, t.b_n).noalias() += qa[a] * wa;
    }
  }
  out.noalias() = s_hat_ * G;
}

void ReducedModel::jacobian_lifted(const Eigen::Ref<const Eigen::VectorXd>& qr,
                                   Eigen::MatrixXd& out) const {
  const Eigen::VectorXd q = basis_.lift(qr);
  const Eigen::MatrixXd& V = basis_.assembled();
  const auto& layout = model_.layout();
  // G(q) V column by column, then project: the N-dependent online cost the
  // tensorial path precomputes away.
  Eigen::MatrixXd GV(model_.dim(), n_);
  Eigen::VectorXd col(model_.dim());
  for (int c = 0; c < n_; ++c) {
    model_.lin_grad().apply(V.col(c), col);
    for (const auto& t : model_.quad_terms()) {
      const auto& fa = layout.fields[static_cast<size_t>(t.a)];
      const auto& fb = layout.fields[static_cast<size_t>(t.b)];
      const auto& fo = layout.fields[static_cast<size_t>(t.out)];
      col.segment(fo.offset, fo.size) +=
          t.coeff * (q.segment(fb.offset, fb.size).cwiseProduct(V.col(c).segment(fa.offset, fa.size)) +
                     q.segment(fa.offset, fa.size).cwiseProduct(V.col(c).segment(fb.offset, fb.size)));
    }
    GV.col(c) = col;
  }
  out.noalias() = s_hat_ * (V.transpose() * GV);
}

double ReducedModel::hamiltonian(const Eigen::Ref<const Eigen::VectorXd>& qr) const {
  return model_.hamiltonian(basis_.lift(qr));
}

InvariantSet ReducedModel::invariants(const Eigen::Ref<const Eigen::VectorXd>& qr) const {
  return model_.invariants(basis_.lift(qr));
}

void RomTensorialSystem::linear_rhs(const Eigen::VectorXd& q, Eigen::VectorXd& out) const {
  out.noalias() = rm_.skew() * (rm_.lin_grad() * q);
}

void RomTensorialSystem::quadratic_polarized(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                             Eigen::VectorXd& out) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(rm_.dim());
  for (const auto& t : rm_.tensor_terms()) {
    const auto aa = a.segment(t.a_off, t.a_n), ab = a.segment(t.b_off, t.b_n);
    const auto ba = b.segment(t.a_off, t.a_n), bb = b.segment(t.b_off, t.b_n);
    for (int i = 0; i < t.a_n; ++i) {
      const auto wi = t.w.middleCols(i * t.b_n, t.b_n);
      g.segment(t.out_off, t.out_n).noalias() += 0.5 * aa[i] * (wi * bb);
      g.segment(t.out_off, t.out_n).noalias() += 0.5 * ba[i] * (wi * ab);
    }
  }
  out.noalias() = rm_.skew() * g;
}

Trajectory integrate_reduced(const ReducedModel& rm, const Eigen::VectorXd& qr0,
                             const TimeMesh& mesh, RomPath path, const IntegrateOptions& opt) {
  if (qr0.size() != rm.dim())
    fail(ErrorCode::invalid_argument, "integrate_reduced: initial state dimension mismatch");
  const std::int64_t nt = mesh.steps;
  const std::int64_t stride = std::max<std::int64_t>(1, opt.sample_stride);
  const double dt = mesh.dt();

  std::vector<std::int64_t> sample_steps;
  for (std::int64_t k = 0; k <= nt; k += stride) sample_steps.push_back(k);
  if (sample_steps.back() != nt) sample_steps.push_back(nt);

  Trajectory traj(rm.dim(), static_cast<std::int64_t>(sample_steps.size()), dt, stride);

  const bool want_hmod = opt.record_modified_hamiltonian;
  const bool record = opt.record_invariants || want_hmod;
  std::vector<std::string> inv_names;
  Eigen::MatrixXd inv_series;
  if (record) {
    inv_names = rm.model().invariant_names();
    if (want_hmod) inv_names.push_back("H_mod");
    inv_series.resize(static_cast<Eigen::Index>(inv_names.size()), traj.samples());
  }
  const Eigen::Index hmod_row = want_hmod ? inv_series.rows() - 1 : 0;

  RomTensorialSystem tensorial(rm);
  RomLiftedSystem lifted(rm);
  const DenseQuadraticSystem& sys =
      (path == RomPath::tensorial) ? static_cast<const DenseQuadraticSystem&>(tensorial)
                                   : static_cast<const DenseQuadraticSystem&>(lifted);
  DenseKahanStepper stepper(sys, dt, opt.kahan);

  Eigen::VectorXd qr = qr0;
  std::size_t next_sample = 0;
  Eigen::VectorXd grad_prev(rm.dim());
  Eigen::Index prev_sample_idx = 0;
  bool prev_sampled = false;

  auto record_sample = [&](std::int64_t k) {
    traj.states().col(static_cast<Eigen::Index>(next_sample)) = qr;
    traj.set_time(static_cast<std::int64_t>(next_sample), static_cast<double>(k) * dt);
    if (record) {
      const auto vals = rm.invariants(qr).values();
      for (size_t i = 0; i < vals.size(); ++i)
        inv_series(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(next_sample)) = vals[i];
    }
    ++next_sample;
  };

  record_sample(0);
  if (want_hmod) {
    grad_prev.resize(rm.dim());
    rm.gradient(qr, grad_prev);
    prev_sampled = true;
  }

  for (std::int64_t k = 1; k <= nt; ++k) {
    const Eigen::VectorXd& update = stepper.step(qr);
    if (want_hmod && prev_sampled) {
      inv_series(hmod_row, prev_sample_idx) =
          inv_series(0, prev_sample_idx) + rm.weight() / 3.0 * grad_prev.dot(update);
      prev_sampled = false;
    }
    if (next_sample < sample_steps.size() && sample_steps[next_sample] == k) {
      prev_sample_idx = static_cast<Eigen::Index>(next_sample);
      record_sample(k);
      if (want_hmod) {
        rm.gradient(qr, grad_prev);
        prev_sampled = true;
      }
    }
  }

  if (want_hmod) {
    const Eigen::Index last = traj.samples() - 1;
    inv_series(hmod_row, last) = modified_hamiltonian(rm, qr, dt);
  }
  if (record) traj.set_invariants(std::move(inv_names), std::move(inv_series));
  return traj;
}

double modified_hamiltonian(const ReducedModel& rm, const Eigen::VectorXd& qr, double dt) {
  Eigen::MatrixXd J(rm.dim(), rm.dim());
  rm.jacobian_tensorial(qr, J);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(rm.dim(), rm.dim()) - 0.5 * dt * J;
  Eigen::VectorXd f(rm.dim());
  rm.rhs_tensorial(qr, f);
  const Eigen::VectorXd u = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(dt * f);
  Eigen::VectorXd g(rm.dim());
  rm.gradient(qr, g);
  return rm.hamiltonian(qr) + rm.weight() / 3.0 * g.dot(u);
}

}  // namespace hrom
