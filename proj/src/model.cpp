#include "model.hpp"

#include <cmath>

#include "exact_solutions.hpp"

namespace hrom {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::single_kdv: return "single_kdv";
    case ModelKind::coupled_kdv: return "coupled_kdv";
    case ModelKind::zakharov_kuznetsov: return "zakharov_kuznetsov";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "single_kdv") return ModelKind::single_kdv;
  if (s == "coupled_kdv") return ModelKind::coupled_kdv;
  if (s == "zakharov_kuznetsov") return ModelKind::zakharov_kuznetsov;
  fail(ErrorCode::config, "unknown model kind '" + s + "'");
}

int FieldLayout::index_of(const std::string& name) const {
  for (size_t i = 0; i < fields.size(); ++i)
    if (fields[i].name == name) return static_cast<int>(i);
  fail(ErrorCode::invalid_argument, "unknown field '" + name + "'");
}

std::vector<double> InvariantSet::values() const {
  std::vector<double> v{hamiltonian, momentum, mass};
  if (mass2) v.push_back(*mass2);
  return v;
}

SkewGradientModel SkewGradientModel::assemble(ModelKind kind, const ModelParams& params,
                                              const GridVariant& grid) {
  if (!std::isfinite(params.alpha) || !std::isfinite(params.mu))
    fail(ErrorCode::config, "model parameters must be finite");

  SkewGradientModel m;
  m.kind_ = kind;
  m.params_ = params;
  m.grid_ = grid;
  m.weight_ = mesh_weight(grid);

  switch (kind) {
    case ModelKind::single_kdv: {
      const auto* g = std::get_if<Grid1D>(&grid);
      if (!g) fail(ErrorCode::config, "single_kdv requires a 1D grid");
      m.layout_.fields = {{"u", 0, g->n}};
      m.layout_.total = g->n;
      m.S_ = periodic_d1(*g);
      m.L_ = SparseOperator::from_stencil(*g, d2_stencil(g->h).scaled(-params.mu), Symmetry::symmetric);
      m.quad_ = {{-params.alpha / 2.0, 0, 0, 0}};
      break;
    }
    case ModelKind::coupled_kdv: {
      const auto* g = std::get_if<Grid1D>(&grid);
      if (!g) fail(ErrorCode::config, "coupled_kdv requires a 1D grid");
      const int n = g->n;
      m.layout_.fields = {{"u", 0, n}, {"v", n, n}};
      m.layout_.total = 2 * n;

      const SparseOperator d1 = periodic_d1(*g);
      m.S_ = SparseOperator::from_blocks(2, 2, n, {{0, 0, &d1}, {1, 1, &d1}}, Symmetry::skew);

      // gradH_u = -(I + D2/6) v - 3/4 u(.)u - 1/4 v(.)v
      // gradH_v = -(I + D2/6) u - 1/2 u(.)v
      Stencil1D mcoupling;
      mcoupling.coeff[0] = -1.0;
      mcoupling = mcoupling.plus(d2_stencil(g->h).scaled(-1.0 / 6.0));
      const SparseOperator M = SparseOperator::from_stencil(*g, mcoupling, Symmetry::symmetric);
      m.L_ = SparseOperator::from_blocks(2, 2, n, {{0, 1, &M}, {1, 0, &M}}, Symmetry::symmetric);
      m.quad_ = {{-3.0 / 4.0, 0, 0, 0}, {-1.0 / 4.0, 1, 1, 0}, {-1.0 / 2.0, 0, 1, 1}};
      break;
    }
    case ModelKind::zakharov_kuznetsov: {
      const auto* g = std::get_if<Grid2D>(&grid);
      if (!g) fail(ErrorCode::config, "zakharov_kuznetsov requires a 2D grid");
      m.layout_.fields = {{"u", 0, g->size()}};
      m.layout_.total = g->size();

      Stencil1D delta;
      delta.coeff[0] = 1.0;
      m.S_ = SparseOperator::from_stencil(*g, Stencil2D::tensor(d1_stencil(g->hx), delta), Symmetry::skew);
      const Stencil2D lap = Stencil2D::tensor(d2_stencil(g->hx), delta)
                                .plus(Stencil2D::tensor(delta, d2_stencil(g->hy)));
      m.L_ = SparseOperator::from_stencil(*g, lap.scaled(-params.mu), Symmetry::symmetric);
      m.quad_ = {{-params.alpha / 2.0, 0, 0, 0}};
      break;
    }
  }
  return m;
}

void SkewGradientModel::check_dim(Eigen::Index n) const {
  if (n != dim()) fail(ErrorCode::invalid_argument, "state dimension mismatch");
}

void SkewGradientModel::gradient(const Eigen::Ref<const Eigen::VectorXd>& q,
                                 Eigen::Ref<Eigen::VectorXd> g) const {
  check_dim(q.size());
  L_.apply(q, g);
  for (const auto& t : quad_) {
    const auto& fa = layout_.fields[static_cast<size_t>(t.a)];
    const auto& fb = layout_.fields[static_cast<size_t>(t.b)];
    const auto& fo = layout_.fields[static_cast<size_t>(t.out)];
    g.segment(fo.offset, fo.size) +=
        t.coeff * q.segment(fa.offset, fa.size).cwiseProduct(q.segment(fb.offset, fb.size));
  }
}

Eigen::VectorXd SkewGradientModel::gradient(const Eigen::Ref<const Eigen::VectorXd>& q) const {
  Eigen::VectorXd g(dim());
  gradient(q, g);
  return g;
}

void SkewGradientModel::rhs(const Eigen::Ref<const Eigen::VectorXd>& q,
                            Eigen::Ref<Eigen::VectorXd> out) const {
  Eigen::VectorXd g(dim());
  gradient(q, g);
  S_.apply(g, out);
}

Eigen::VectorXd SkewGradientModel::rhs(const Eigen::Ref<const Eigen::VectorXd>& q) const {
  Eigen::VectorXd out(dim());
  rhs(q, out);
  return out;
}

Eigen::MatrixXd SkewGradientModel::gradient_jacobian_dense(
    const Eigen::Ref<const Eigen::VectorXd>& q) const {
  check_dim(q.size());
  Eigen::MatrixXd G = L_.dense();
  for (const auto& t : quad_) {
    const auto& fa = layout_.fields[static_cast<size_t>(t.a)];
    const auto& fb = layout_.fields[static_cast<size_t>(t.b)];
    const auto& fo = layout_.fields[static_cast<size_t>(t.out)];
    for (int j = 0; j < fa.size; ++j) {
      G(fo.offset + j, fa.offset + j) += t.coeff * q[fb.offset + j];
      G(fo.offset + j, fb.offset + j) += t.coeff * q[fa.offset + j];
    }
  }
  return G;
}

Eigen::MatrixXd SkewGradientModel::jacobian_dense(const Eigen::Ref<const Eigen::VectorXd>& q) const {
  return S_.dense() * gradient_jacobian_dense(q);
}

double SkewGradientModel::hamiltonian(const Eigen::Ref<const Eigen::VectorXd>& q) const {
  check_dim(q.size());
  const double alpha = params_.alpha, mu = params_.mu;
  switch (kind_) {
    case ModelKind::single_kdv: {
      const auto& g = std::get<Grid1D>(grid_);
      double sum = 0.0;
      for (int i = 0; i < g.n; ++i) {
        const double ui = q[i];
        const double du = (q[(i + 1) % g.n] - ui) / g.h;
        sum += -alpha / 6.0 * ui * ui * ui + 0.5 * mu * du * du;
      }
      return sum * g.h;
    }
    case ModelKind::coupled_kdv: {
      const auto& g = std::get<Grid1D>(grid_);
      const int n = g.n;
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const double ui = q[i];
        const double vi = q[n + i];
        const double vpp =
            (q[n + (i + 1) % n] - 2.0 * vi + q[n + (i - 1 + n) % n]) / (g.h * g.h);
        sum += -ui * vi - 0.25 * ui * vi * vi - 0.25 * ui * ui * ui - ui * vpp / 6.0;
      }
      return sum * g.h;
    }
    case ModelKind::zakharov_kuznetsov: {
      const auto& g = std::get<Grid2D>(grid_);
      double sum = 0.0;
      for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
          const double uij = q[g.index(i, j)];
          const double dux = (q[g.index((i + 1) % g.nx, j)] - uij) / g.hx;
          const double duy = (q[g.index(i, (j + 1) % g.ny)] - uij) / g.hy;
          sum += -alpha / 6.0 * uij * uij * uij + 0.5 * mu * (dux * dux + duy * duy);
        }
      }
      return sum * g.hx * g.hy;
    }
  }
  return 0.0;
}

double SkewGradientModel::hamiltonian_scale(const Eigen::Ref<const Eigen::VectorXd>& q) const {
  check_dim(q.size());
  const double alpha = params_.alpha, mu = params_.mu;
  switch (kind_) {
    case ModelKind::single_kdv: {
      const auto& g = std::get<Grid1D>(grid_);
      double sum = 0.0;
      for (int i = 0; i < g.n; ++i) {
        const double ui = q[i];
        const double du = (q[(i + 1) % g.n] - ui) / g.h;
        sum += std::abs(alpha / 6.0 * ui * ui * ui) + std::abs(0.5 * mu * du * du);
      }
      return sum * g.h;
    }
    case ModelKind::coupled_kdv: {
      const auto& g = std::get<Grid1D>(grid_);
      const int n = g.n;
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const double ui = q[i];
        const double vi = q[n + i];
        const double vpp = (q[n + (i + 1) % n] - 2.0 * vi + q[n + (i - 1 + n) % n]) / (g.h * g.h);
        sum += std::abs(ui * vi) + std::abs(0.25 * ui * vi * vi) +
               std::abs(0.25 * ui * ui * ui) + std::abs(ui * vpp / 6.0);
      }
      return sum * g.h;
    }
    case ModelKind::zakharov_kuznetsov: {
      const auto& g = std::get<Grid2D>(grid_);
      double sum = 0.0;
      for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
          const double uij = q[g.index(i, j)];
          const double dux = (q[g.index((i + 1) % g.nx, j)] - uij) / g.hx;
          const double duy = (q[g.index(i, (j + 1) % g.ny)] - uij) / g.hy;
          sum += std::abs(alpha / 6.0 * uij * uij * uij) +
                 std::abs(0.5 * mu * (dux * dux + duy * duy));
        }
      }
      return sum * g.hx * g.hy;
    }
  }
  return 0.0;
}

InvariantSet SkewGradientModel::invariants(const Eigen::Ref<const Eigen::VectorXd>& q) const {
  check_dim(q.size());
  InvariantSet inv;
  inv.hamiltonian = hamiltonian(q);
  switch (kind_) {
    case ModelKind::single_kdv: {
      const double h = std::get<Grid1D>(grid_).h;
      inv.momentum = q.squaredNorm() * h;
      inv.mass = q.sum() * h;
      break;
    }
    case ModelKind::coupled_kdv: {
      const auto& g = std::get<Grid1D>(grid_);
      const int n = g.n;
      inv.momentum = q.squaredNorm() * g.h;  // sum of u^2 + v^2
      inv.mass = q.head(n).sum() * g.h;
      inv.mass2 = q.tail(n).sum() * g.h;
      break;
    }
    case ModelKind::zakharov_kuznetsov: {
      const double w = weight_;
      inv.momentum = 0.5 * q.squaredNorm() * w;
      inv.mass = q.sum() * w;
      break;
    }
  }
  return inv;
}

std::vector<std::string> SkewGradientModel::invariant_names() const {
  if (kind_ == ModelKind::coupled_kdv) return {"H", "I1", "I2", "I3"};
  return {"H", "I1", "I2"};
}

// --- initial conditions ------------------------------------------------------

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

Eigen::VectorXd ic_one_soliton(const SkewGradientModel& m, const OneSolitonIc& ic) {
  const auto* g = std::get_if<Grid1D>(&m.grid());
  if (!g || m.kind() != ModelKind::single_kdv)
    fail(ErrorCode::config, "one_soliton initial condition requires the single KdV model");
  Eigen::VectorXd q(g->n);
  const double sb = std::sqrt(ic.beta);
  for (int i = 0; i < g->n; ++i) {
    const double s = sech(sb * g->node(i) / 2.0);
    q[i] = ic.beta * s * s;
  }
  return q;
}

Eigen::VectorXd ic_two_soliton(const SkewGradientModel& m, const TwoSolitonIc& ic) {
  const auto* g = std::get_if<Grid1D>(&m.grid());
  if (!g || m.kind() != ModelKind::single_kdv)
    fail(ErrorCode::config, "two_soliton initial condition requires the single KdV model");
  TwoSolitonParams p;
  p.k1 = ic.k1;
  p.k2 = ic.k2;
  p.phase1 = ic.phase1;
  p.phase2 = ic.phase2;
  Eigen::VectorXd q(g->n);
  for (int i = 0; i < g->n; ++i) q[i] = exact_two_soliton(g->node(i), 0.0, p);
  return q;
}

Eigen::VectorXd ic_gaussian(const SkewGradientModel& m, const GaussianIc& ic) {
  const auto* g = std::get_if<Grid1D>(&m.grid());
  if (!g || m.kind() != ModelKind::coupled_kdv)
    fail(ErrorCode::config, "gaussian initial condition requires the coupled KdV model");
  Eigen::VectorXd q = Eigen::VectorXd::Zero(2 * g->n);
  for (int i = 0; i < g->n; ++i) {
    const double x = g->node(i) - ic.center;
    q[g->n + i] = ic.amplitude * std::exp(-x * x / ic.width);
  }
  return q;
}

Eigen::VectorXd ic_zk_two_pulse(const SkewGradientModel& m, const ZkTwoPulseIc& ic) {
  const auto* g = std::get_if<Grid2D>(&m.grid());
  if (!g || m.kind() != ModelKind::zakharov_kuznetsov)
    fail(ErrorCode::config, "zk_two_pulse initial condition requires the Zakharov-Kuznetsov model");
  if (ic.a2m.empty())
    fail(ErrorCode::config,
         "zk_two_pulse: the a2m coefficient list is a required input and was not provided");
  if (ic.pulses.empty()) fail(ErrorCode::config, "zk_two_pulse: at least one pulse is required");

  Eigen::VectorXd q = Eigen::VectorXd::Zero(g->size());
  for (const auto& p : ic.pulses) {
    if (p.c <= 0.0) fail(ErrorCode::config, "zk_two_pulse: pulse velocity must be positive");
    const double sc = std::sqrt(p.c);
    for (int i = 0; i < g->nx; ++i) {
      for (int j = 0; j < g->ny; ++j) {
        const double rx = g->x_node(i) - p.x;
        const double ry = g->y_node(j) - p.y;
        const double r = std::sqrt(rx * rx + ry * ry);
        const double theta = std::atan2(1.0, sc * r / 2.0);  // arccot
        double s = 0.0;
        for (size_t mi = 0; mi < ic.a2m.size(); ++mi) {
          const double mm = 2.0 * static_cast<double>(mi + 1);
          s += ic.a2m[mi] * (std::cos(mm * theta) - 1.0);
        }
        q[g->index(i, j)] += p.c / 3.0 * s;
      }
    }
  }
  return q;
}

}  // namespace

Eigen::VectorXd initial_condition(const SkewGradientModel& model, const IcSpec& ic) {
  return std::visit(
      [&](const auto& spec) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, OneSolitonIc>) return ic_one_soliton(model, spec);
        else if constexpr (std::is_same_v<T, TwoSolitonIc>) return ic_two_soliton(model, spec);
        else if constexpr (std::is_same_v<T, GaussianIc>) return ic_gaussian(model, spec);
        else return ic_zk_two_pulse(model, spec);
      },
      ic);
}

}  // namespace hrom
