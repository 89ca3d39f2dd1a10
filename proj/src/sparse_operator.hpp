#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <optional>
#include <vector>

#include "grid.hpp"
#include "stencil.hpp"

namespace hrom {

// Periodic stencil operator materialized as a circulant-banded sparse matrix.
// apply() walks each row in ascending column order, so results match a naive
// dense mat-vec bitwise and are independent of Eigen kernel choices.
class SparseOperator {
public:
  using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  SparseOperator() = default;

  static SparseOperator from_stencil(int n, const Stencil1D& s, Symmetry expected);
  static SparseOperator from_stencil(const Grid1D& g, const Stencil1D& s, Symmetry expected) {
    return from_stencil(g.n, s, expected);
  }
  static SparseOperator from_stencil(const Grid2D& g, const Stencil2D& s, Symmetry expected);
  static SparseOperator identity(Eigen::Index n, double scale = 1.0);
  // Assemble from equally sized sub-blocks; entries are (block row, block col, op).
  static SparseOperator from_blocks(int block_rows, int block_cols, Eigen::Index block_dim,
                                    const std::vector<std::tuple<int, int, const SparseOperator*>>& blocks,
                                    Symmetry sym);

  Eigen::Index rows() const { return mat_.rows(); }
  Eigen::Index cols() const { return mat_.cols(); }
  Eigen::Index nonzeros() const { return mat_.nonZeros(); }
  Symmetry symmetry() const { return sym_; }

  bool is_circulant_1d() const { return stencil1d_.has_value(); }
  const Stencil1D& stencil_1d() const;

  void apply(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Ref<Eigen::VectorXd> y) const;
  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  // Column-by-column application (used when projecting onto a basis).
  Eigen::MatrixXd apply_columns(const Eigen::Ref<const Eigen::MatrixXd>& X) const;

  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(mat_); }
  const Sparse& matrix() const { return mat_; }

  // max |(A + A^T)_ij| for skew, max |(A - A^T)_ij| for symmetric.
  // Constructed stencil operators satisfy this with exactly zero residual.
  double symmetry_residual() const;

private:
  SparseOperator(Sparse m, Symmetry s) : mat_(std::move(m)), sym_(s) {}

  Sparse mat_;
  Symmetry sym_ = Symmetry::none;
  std::optional<Stencil1D> stencil1d_;
};

}  // namespace hrom
