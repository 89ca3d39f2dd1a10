#include "operators.hpp"

namespace hrom {

Stencil1D d1_stencil(double h) {
  Stencil1D s;
  const double c = 1.0 / (2.0 * h);
  s.coeff[1] = c;
  s.coeff[-1] = -c;
  return s;
}

Stencil1D d2_stencil(double h) {
  Stencil1D s;
  const double c = 1.0 / (h * h);
  s.coeff[-1] = c;
  s.coeff[0] = -2.0 * c;
  s.coeff[1] = c;
  return s;
}

SparseOperator periodic_d1(const Grid1D& g) {
  return SparseOperator::from_stencil(g, d1_stencil(g.h), Symmetry::skew);
}

SparseOperator periodic_d2(const Grid1D& g) {
  return SparseOperator::from_stencil(g, d2_stencil(g.h), Symmetry::symmetric);
}

SparseOperator d3_product(const SparseOperator& d1, const SparseOperator& d2) {
  if (d1.cols() != d2.rows()) fail(ErrorCode::invalid_argument, "d3_product: dimension mismatch");
  if (!d1.is_circulant_1d() || !d2.is_circulant_1d())
    fail(ErrorCode::invalid_argument, "d3_product: operands must be 1D circulants");
  const Stencil1D s = d1.stencil_1d().convolve(d2.stencil_1d());
  return SparseOperator::from_stencil(static_cast<int>(d1.rows()), s, Symmetry::skew);
}

Operators2D kron_2d(const Grid2D& g) {
  const Stencil1D d1x = d1_stencil(g.hx);
  const Stencil1D d2x = d2_stencil(g.hx);
  const Stencil1D d2y = d2_stencil(g.hy);
  Stencil1D delta;
  delta.coeff[0] = 1.0;

  Operators2D ops;
  ops.dx = SparseOperator::from_stencil(g, Stencil2D::tensor(d1x, delta), Symmetry::skew);
  ops.dxx = SparseOperator::from_stencil(g, Stencil2D::tensor(d2x, delta), Symmetry::symmetric);
  ops.dyy = SparseOperator::from_stencil(g, Stencil2D::tensor(delta, d2y), Symmetry::symmetric);
  // Products of Kronecker circulants factor stencil-wise:
  //   dx*dxx = (D1*D2) kron I,  dx*dyy = D1 kron D2,
  // entry-for-entry identical to the sparse matrix products.
  ops.dxxx = SparseOperator::from_stencil(g, Stencil2D::tensor(d1x.convolve(d2x), delta), Symmetry::skew);
  ops.dxyy = SparseOperator::from_stencil(g, Stencil2D::tensor(d1x, d2y), Symmetry::skew);
  return ops;
}

}  // namespace hrom
