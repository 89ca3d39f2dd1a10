#include "pod.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <random>

namespace hrom {

namespace {

// Seed-stable standard normals (std::normal_distribution is implementation
// defined, so roll Box-Muller over the standardized mt19937_64 stream).
class GaussianStream {
public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

private:
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

Eigen::MatrixXd thin_q(const Eigen::MatrixXd& Y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(Y.rows(), Y.cols());
}

}  // namespace

SvdResult randomized_svd(const Eigen::Ref<const Eigen::MatrixXd>& M, int rank,
                         const RsvdOptions& opt) {
  const Eigen::Index rows = M.rows(), cols = M.cols();
  const Eigen::Index mindim = std::min(rows, cols);
  if (rank < 1 || rank > mindim)
    fail(ErrorCode::invalid_argument,
         "randomized_svd: rank " + std::to_string(rank) + " out of range for " +
             std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
  const Eigen::Index sketch = std::min<Eigen::Index>(rank + std::max(0, opt.oversample), mindim);

  GaussianStream gauss(opt.seed);
  Eigen::MatrixXd omega(cols, sketch);
  for (Eigen::Index j = 0; j < sketch; ++j)
    for (Eigen::Index i = 0; i < cols; ++i) omega(i, j) = gauss.next();

  Eigen::MatrixXd Q = thin_q(M * omega);
  for (int it = 0; it < opt.power_iterations; ++it) {
    Q = thin_q(M.transpose() * Q);
    Q = thin_q(M * Q);
  }

  const Eigen::MatrixXd B = Q.transpose() * M;  // sketch x cols
  Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SvdResult res;
  res.left = Q * svd.matrixU().leftCols(rank);
  res.sigma = svd.singularValues().head(rank);
  res.right = svd.matrixV().leftCols(rank);
  return res;
}

Eigen::VectorXd ric_curve(const Eigen::Ref<const Eigen::VectorXd>& sigma) {
  if (sigma.size() == 0) fail(ErrorCode::invalid_argument, "ric_curve: empty spectrum");
  const double total = sigma.squaredNorm();
  if (!(total > 0.0)) fail(ErrorCode::invalid_argument, "ric_curve: all singular values are zero");
  Eigen::VectorXd out(sigma.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    acc += sigma[i] * sigma[i];
    out[i] = 100.0 * acc / total;
  }
  return out;
}

int ric_select(const Eigen::Ref<const Eigen::VectorXd>& sigma, double threshold) {
  const Eigen::VectorXd curve = ric_curve(sigma);
  for (Eigen::Index i = 0; i < curve.size(); ++i)
    if (curve[i] >= threshold) return static_cast<int>(i) + 1;
  return static_cast<int>(curve.size());
}

// --- basis ---------------------------------------------------------------------

Basis::Basis(std::vector<Block> blocks, int full_dim) : blocks_(std::move(blocks)), full_dim_(full_dim) {
  int off = 0;
  for (auto& b : blocks_) {
    b.reduced_offset = off;
    off += static_cast<int>(b.modes.cols());
  }
  total_modes_ = off;
}

Eigen::VectorXd Basis::lift(const Eigen::Ref<const Eigen::VectorXd>& qr) const {
  if (qr.size() != total_modes_) fail(ErrorCode::invalid_argument, "lift: dimension mismatch");
  Eigen::VectorXd q = Eigen::VectorXd::Zero(full_dim_);
  for (const auto& b : blocks_)
    q.segment(b.full_offset, b.modes.rows()) = b.modes * qr.segment(b.reduced_offset, b.modes.cols());
  return q;
}

Eigen::VectorXd Basis::project(const Eigen::Ref<const Eigen::VectorXd>& q) const {
  if (q.size() != full_dim_) fail(ErrorCode::invalid_argument, "project: dimension mismatch");
  Eigen::VectorXd qr(total_modes_);
  for (const auto& b : blocks_)
    qr.segment(b.reduced_offset, b.modes.cols()) =
        b.modes.transpose() * q.segment(b.full_offset, b.modes.rows());
  return qr;
}

const Eigen::MatrixXd& Basis::assembled() const {
  if (!assembled_ready_) {
    assembled_ = Eigen::MatrixXd::Zero(full_dim_, total_modes_);
    for (const auto& b : blocks_)
      assembled_.block(b.full_offset, b.reduced_offset, b.modes.rows(), b.modes.cols()) = b.modes;
    assembled_ready_ = true;
  }
  return assembled_;
}

Basis Basis::truncated(int n_per_block) const {
  std::vector<Block> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    if (n_per_block > b.modes.cols())
      fail(ErrorCode::invalid_argument, "truncated: not enough modes in block " + b.field);
    Block nb;
    nb.field = b.field;
    nb.full_offset = b.full_offset;
    nb.modes = b.modes.leftCols(n_per_block);
    nb.spectrum = b.spectrum;
    out.push_back(std::move(nb));
  }
  return Basis(std::move(out), full_dim_);
}

namespace {

SvdResult spectrum_of_block(const Eigen::Ref<const Eigen::MatrixXd>& Mblock,
                            const BasisOptions& opt) {
  const Eigen::Index mindim = std::min(Mblock.rows(), Mblock.cols());
  bool full = opt.method == SvdMethod::full;
  if (opt.method == SvdMethod::automatic) full = mindim <= opt.full_cutoff;
  if (full) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(Mblock, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
  }
  const int rank = static_cast<int>(std::min<Eigen::Index>(opt.max_rank, mindim));
  return randomized_svd(Mblock, rank, opt.rsvd);
}

int effective_rank(const Eigen::VectorXd& sigma) {
  if (sigma.size() == 0) return 0;
  const double tol = sigma[0] * 1e-12;
  int r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > tol) ++r;
  return r;
}

}  // namespace

Basis build_basis(const Eigen::Ref<const Eigen::MatrixXd>& snapshots, const FieldLayout& layout,
                  const BasisOptions& opt) {
  if (snapshots.cols() == 0) fail(ErrorCode::invalid_argument, "build_basis: no snapshots");
  if (snapshots.rows() != layout.total)
    fail(ErrorCode::invalid_argument, "build_basis: snapshot rows do not match the field layout");

  std::vector<Basis::Block> blocks;
  auto build_block = [&](const std::string& name, int offset, int size) {
    const SvdResult svd = spectrum_of_block(snapshots.middleRows(offset, size), opt);
    const int rank = effective_rank(svd.sigma);
    int n = 0;
    if (opt.num_modes) {
      n = *opt.num_modes;
      if (n < 1 || n > rank)
        fail(ErrorCode::invalid_argument, "build_basis: requested " + std::to_string(n) +
                                              " modes exceeds available rank " +
                                              std::to_string(rank) + " in block " + name);
    } else {
      n = ric_select(svd.sigma, opt.ric_threshold);
      n = std::min(n, rank > 0 ? rank : 1);
    }
    Basis::Block b;
    b.field = name;
    b.full_offset = offset;
    b.modes = svd.left.leftCols(n);
    b.spectrum = svd.sigma;
    blocks.push_back(std::move(b));
  };

  if (opt.mode == BasisMode::per_field && layout.fields.size() > 1) {
    for (const auto& f : layout.fields) build_block(f.name, f.offset, f.size);
  } else {
    build_block("all", 0, layout.total);
  }
  return Basis(std::move(blocks), layout.total);
}

}  // namespace hrom
