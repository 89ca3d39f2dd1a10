#pragma once

#include "sparse_operator.hpp"

namespace hrom {

// Centred first-derivative circulant: +-1/(2h) off-diagonals with periodic wrap.
// Exactly skew-symmetric; every row and column sums to zero.
SparseOperator periodic_d1(const Grid1D& g);

// Centred second-derivative circulant: (-2, 1, 1)/h^2 with periodic wrap.
// Exactly symmetric; rows sum to zero.
SparseOperator periodic_d2(const Grid1D& g);

// D3 := D1*D2, the third-derivative approximation. Both inputs must be 1D
// circulants on the same grid; the product is exactly skew-symmetric.
SparseOperator d3_product(const SparseOperator& d1, const SparseOperator& d2);

struct Operators2D {
  SparseOperator dx;    // D1 (x) kron I_y, skew
  SparseOperator dxx;   // D2 (x) kron I_y, symmetric
  SparseOperator dyy;   // I_x kron D2, symmetric
  SparseOperator dxxx;  // dx*dxx, skew
  SparseOperator dxyy;  // dx*dyy, skew
};

Operators2D kron_2d(const Grid2D& g);

// Raw stencils (shared with model assembly).
Stencil1D d1_stencil(double h);
Stencil1D d2_stencil(double h);

}  // namespace hrom
