#pragma once

#include <map>
#include <utility>

namespace hrom {

enum class Symmetry { none, symmetric, skew };

// Circulant stencil: offset -> coefficient, applied with periodic wrap.
// Coefficients are exact IEEE doubles (integer stencils scaled by powers of h),
// so the symmetry checks below use exact floating-point comparison on purpose.
struct Stencil1D {
  std::map<int, double> coeff;

  double at(int offset) const {
    auto it = coeff.find(offset);
    return it == coeff.end() ? 0.0 : it->second;
  }

  Stencil1D scaled(double s) const;
  Stencil1D plus(const Stencil1D& rhs) const;
  // Product of the two circulants (stencil convolution).
  Stencil1D convolve(const Stencil1D& rhs) const;
  Symmetry classify() const;
};

struct Stencil2D {
  // (x offset, y offset) -> coefficient.
  std::map<std::pair<int, int>, double> coeff;

  static Stencil2D tensor(const Stencil1D& sx, const Stencil1D& sy);
  Stencil2D scaled(double s) const;
  Stencil2D plus(const Stencil2D& rhs) const;
  Symmetry classify() const;
};

}  // namespace hrom
