#include "sparse_operator.hpp"

#include <algorithm>
#include <map>

namespace hrom {

namespace {

int wrap(int i, int n) {
  int r = i % n;
  return r < 0 ? r + n : r;
}

void verify_expected(Symmetry got, Symmetry expected) {
  if (expected == Symmetry::none) return;
  if (got != expected)
    fail(ErrorCode::internal, "stencil symmetry does not match the expected operator symmetry");
}

}  // namespace

SparseOperator SparseOperator::from_stencil(int n, const Stencil1D& s, Symmetry expected) {
  verify_expected(s.classify(), expected);
  if (n < 3) fail(ErrorCode::invalid_argument, "from_stencil: need at least 3 nodes");
  Sparse m(n, n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n) * s.coeff.size());
  for (int i = 0; i < n; ++i) {
    // Accumulate aliased offsets (|offset| >= n) in sorted-offset order so the
    // result is identical for the entry and its transpose partner.
    std::map<int, double> row;
    for (const auto& [o, v] : s.coeff) row[wrap(i + o, n)] += v;
    for (const auto& [j, v] : row) trips.emplace_back(i, j, v);
  }
  m.setFromTriplets(trips.begin(), trips.end());
  SparseOperator op(std::move(m), expected);
  op.stencil1d_ = s;
  return op;
}

SparseOperator SparseOperator::from_stencil(const Grid2D& g, const Stencil2D& s, Symmetry expected) {
  verify_expected(s.classify(), expected);
  const int n = g.size();
  Sparse m(n, n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n) * s.coeff.size());
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      std::map<int, double> row;
      for (const auto& [o, v] : s.coeff)
        row[g.index(wrap(i + o.first, g.nx), wrap(j + o.second, g.ny))] += v;
      const int r = g.index(i, j);
      for (const auto& [cidx, v] : row) trips.emplace_back(r, cidx, v);
    }
  }
  m.setFromTriplets(trips.begin(), trips.end());
  return SparseOperator(std::move(m), expected);
}

SparseOperator SparseOperator::identity(Eigen::Index n, double scale) {
  Sparse m(n, n);
  m.setIdentity();
  if (scale != 1.0) m *= scale;
  return SparseOperator(std::move(m), Symmetry::symmetric);
}

SparseOperator SparseOperator::from_blocks(
    int block_rows, int block_cols, Eigen::Index block_dim,
    const std::vector<std::tuple<int, int, const SparseOperator*>>& blocks, Symmetry sym) {
  Sparse m(block_rows * block_dim, block_cols * block_dim);
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& [bi, bj, op] : blocks) {
    if (op->rows() != block_dim || op->cols() != block_dim)
      fail(ErrorCode::invalid_argument, "from_blocks: sub-block dimension mismatch");
    const Eigen::Index r0 = bi * block_dim, c0 = bj * block_dim;
    for (Eigen::Index r = 0; r < op->rows(); ++r)
      for (Sparse::InnerIterator it(op->mat_, r); it; ++it)
        trips.emplace_back(r0 + r, c0 + it.col(), it.value());
  }
  m.setFromTriplets(trips.begin(), trips.end());
  return SparseOperator(std::move(m), sym);
}

const Stencil1D& SparseOperator::stencil_1d() const {
  if (!stencil1d_) fail(ErrorCode::invalid_argument, "operator is not a 1D circulant");
  return *stencil1d_;
}

void SparseOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& x,
                           Eigen::Ref<Eigen::VectorXd> y) const {
  if (x.size() != cols() || y.size() != rows())
    fail(ErrorCode::invalid_argument, "operator apply: dimension mismatch");
  for (Eigen::Index i = 0; i < rows(); ++i) {
    double s = 0.0;
    for (Sparse::InnerIterator it(mat_, i); it; ++it) s += it.value() * x[it.col()];
    y[i] = s;
  }
}

Eigen::VectorXd SparseOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd y(rows());
  apply(x, y);
  return y;
}

Eigen::MatrixXd SparseOperator::apply_columns(const Eigen::Ref<const Eigen::MatrixXd>& X) const {
  Eigen::MatrixXd Y(rows(), X.cols());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    Eigen::VectorXd col(rows());
    apply(X.col(c), col);
    Y.col(c) = col;
  }
  return Y;
}

double SparseOperator::symmetry_residual() const {
  const double sign = (sym_ == Symmetry::skew) ? 1.0 : -1.0;
  Eigen::SparseMatrix<double> a = mat_;
  Eigen::SparseMatrix<double> at = Eigen::SparseMatrix<double>(mat_.transpose());
  Eigen::SparseMatrix<double> r = a + sign * at;
  double mx = 0.0;
  for (int k = 0; k < r.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(r, k); it; ++it)
      mx = std::max(mx, std::abs(it.value()));
  return mx;
}

}  // namespace hrom
