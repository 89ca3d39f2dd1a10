#include "diagnostics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace hrom {

namespace {

double weighted_norm(const Eigen::Ref<const Eigen::VectorXd>& v, double w) {
  return std::sqrt(v.squaredNorm() * w);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

double relative_l2_state(const Eigen::Ref<const Eigen::VectorXd>& reference,
                         const Eigen::Ref<const Eigen::VectorXd>& candidate, double weight) {
  const double denom = weighted_norm(reference, weight);
  if (!(denom > 0.0)) fail(ErrorCode::invalid_argument, "relative error: zero-norm reference state");
  return weighted_norm(reference - candidate, weight) / denom;
}

double relative_l2_mean(const Eigen::Ref<const Eigen::MatrixXd>& full,
                        const Eigen::Ref<const Eigen::MatrixXd>& approx, double weight) {
  if (full.rows() != approx.rows() || full.cols() != approx.cols())
    fail(ErrorCode::invalid_argument, "relative error: shape mismatch");
  double acc = 0.0;
  for (Eigen::Index k = 0; k < full.cols(); ++k)
    acc += relative_l2_state(full.col(k), approx.col(k), weight);
  return acc / static_cast<double>(full.cols());
}

ErrorReport compare_trajectories(const SkewGradientModel& model, const Trajectory& fom,
                                 const Trajectory& reduced, const Basis& basis,
                                 bool include_initial) {
  if (fom.samples() != reduced.samples())
    fail(ErrorCode::invalid_argument, "compare: sample counts differ");
  if (fom.dim() != model.dim() || reduced.dim() != basis.total_modes() ||
      basis.full_dim() != model.dim())
    fail(ErrorCode::invalid_argument, "compare: dimension mismatch");
  for (std::int64_t k = 0; k < fom.samples(); ++k)
    if (std::abs(fom.times()[static_cast<size_t>(k)] - reduced.times()[static_cast<size_t>(k)]) >
        1e-12 * std::max(1.0, std::abs(fom.times()[static_cast<size_t>(k)])))
      fail(ErrorCode::invalid_argument, "compare: sample times differ");

  const double w = model.weight();
  const auto names = model.invariant_names();
  ErrorReport rep;
  rep.invariants.resize(names.size());
  for (size_t i = 0; i < names.size(); ++i) rep.invariants[i].name = names[i];

  const std::int64_t first = include_initial ? 0 : 1;
  for (std::int64_t k = first; k < fom.samples(); ++k) {
    const Eigen::VectorXd lifted = basis.lift(reduced.states().col(k));
    rep.times.push_back(fom.times()[static_cast<size_t>(k)]);
    rep.rel_l2.push_back(relative_l2_state(fom.states().col(k), lifted, w));
    const auto full_inv = model.invariants(fom.states().col(k)).values();
    const auto red_inv = model.invariants(lifted).values();
    for (size_t i = 0; i < names.size(); ++i)
      rep.invariants[i].abs_err.push_back(std::abs(full_inv[i] - red_inv[i]));
  }
  rep.rel_l2_mean = mean(rep.rel_l2);
  for (auto& inv : rep.invariants) inv.mean = mean(inv.abs_err);
  return rep;
}

std::vector<double> eoc(const std::vector<std::pair<double, double>>& level_errors) {
  if (level_errors.size() < 2) fail(ErrorCode::invalid_argument, "eoc: need at least two levels");
  std::vector<double> orders;
  for (size_t i = 0; i + 1 < level_errors.size(); ++i) {
    const auto& [h0, e0] = level_errors[i];
    const auto& [h1, e1] = level_errors[i + 1];
    if (!(e0 > 0.0) || !(e1 > 0.0)) fail(ErrorCode::invalid_argument, "eoc: errors must be positive");
    if (std::abs(h0 / h1 - 2.0) > 1e-9)
      fail(ErrorCode::invalid_argument, "eoc: mesh sizes must halve between levels");
    orders.push_back(std::log2(e0 / e1));
  }
  return orders;
}

namespace {

class Stopwatch {
public:
  void start() { t0_ = std::chrono::steady_clock::now(); }
  double stop() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

private:
  std::chrono::steady_clock::time_point t0_;
};

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename F>
double timed_median(int reps, F&& body) {
  body();  // warmup: page in buffers, prime caches
  std::vector<double> times;
  times.reserve(static_cast<size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    Stopwatch sw;
    sw.start();
    body();
    times.push_back(sw.stop());
  }
  return median_of(std::move(times));
}

}  // namespace

BenchReport benchmark_pipeline(const SkewGradientModel& model, const Eigen::VectorXd& q0,
                               const TimeMesh& mesh, int n_modes, const RsvdOptions& rsvd,
                               int reps) {
  if (reps < 1) fail(ErrorCode::invalid_argument, "benchmark: need at least one repetition");
  BenchReport rep;
  rep.dim = model.dim();
  rep.modes = n_modes;
  rep.steps = mesh.steps;
  rep.repetitions = reps;

  IntegrateOptions iopt;  // no recording: time the plain solves
  Trajectory fom;
  rep.fom_s = timed_median(reps, [&] { fom = integrate(model, q0, mesh, iopt); });

  BasisOptions bopt;
  bopt.mode = BasisMode::per_field;
  bopt.num_modes = n_modes;
  bopt.method = SvdMethod::randomized;
  bopt.max_rank = n_modes;
  bopt.rsvd = rsvd;
  Basis basis;
  const auto snaps = fom.snapshot_block(false);
  rep.basis_s = timed_median(reps, [&] { basis = build_basis(snaps, model.layout(), bopt); });

  // Linear projections alone: the offline work a plain POD-Galerkin setup needs.
  const Eigen::MatrixXd& V = basis.assembled();
  rep.reduce_linear_s = timed_median(reps, [&] {
    Eigen::MatrixXd s_hat = V.transpose() * model.skew().apply_columns(V);
    Eigen::MatrixXd l_hat = V.transpose() * model.lin_grad().apply_columns(V);
    (void)s_hat;
    (void)l_hat;
  });
  ReducedModel rm;
  rep.reduce_tensor_s = timed_median(reps, [&] { rm = reduce(model, basis); });

  const Eigen::VectorXd qr0 = basis.project(q0);
  rep.tensorial_timing_steps = std::max<std::int64_t>(mesh.steps, 20000);
  const TimeMesh long_mesh = TimeMesh::with_steps(
      mesh.dt() * static_cast<double>(rep.tensorial_timing_steps), rep.tensorial_timing_steps);
  const double tens_long =
      timed_median(reps, [&] { integrate_reduced(rm, qr0, long_mesh, RomPath::tensorial, iopt); });
  rep.online_tensorial_s = tens_long * static_cast<double>(mesh.steps) /
                           static_cast<double>(rep.tensorial_timing_steps);
  rep.online_lifted_s =
      timed_median(reps, [&] { integrate_reduced(rm, qr0, mesh, RomPath::lifted, iopt); });
  return rep;
}

}  // namespace hrom
