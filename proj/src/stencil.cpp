#include "stencil.hpp"

namespace hrom {

Stencil1D Stencil1D::scaled(double s) const {
  Stencil1D out;
  for (const auto& [o, v] : coeff) out.coeff[o] = s * v;
  return out;
}

Stencil1D Stencil1D::plus(const Stencil1D& rhs) const {
  Stencil1D out = *this;
  for (const auto& [o, v] : rhs.coeff) out.coeff[o] += v;
  return out;
}

Stencil1D Stencil1D::convolve(const Stencil1D& rhs) const {
  // Accumulation order is fixed by the sorted maps; every offset pair (s,-s)
  // collects term-by-term exact negations (or copies), which keeps products of
  // skew/symmetric circulants exactly skew/symmetric in floating point.
  Stencil1D out;
  for (const auto& [k, a] : coeff)
    for (const auto& [m, b] : rhs.coeff) out.coeff[k + m] += a * b;
  return out;
}

Symmetry Stencil1D::classify() const {
  bool sym = true, skew = true;
  for (const auto& [o, v] : coeff) {
    const double mirror = at(-o);
    if (mirror != v) sym = false;
    if (mirror != -v) skew = false;
  }
  if (sym) return Symmetry::symmetric;
  if (skew) return Symmetry::skew;
  return Symmetry::none;
}

Stencil2D Stencil2D::tensor(const Stencil1D& sx, const Stencil1D& sy) {
  Stencil2D out;
  for (const auto& [ox, vx] : sx.coeff)
    for (const auto& [oy, vy] : sy.coeff) out.coeff[{ox, oy}] = vx * vy;
  return out;
}

Stencil2D Stencil2D::scaled(double s) const {
  Stencil2D out;
  for (const auto& [o, v] : coeff) out.coeff[o] = s * v;
  return out;
}

Stencil2D Stencil2D::plus(const Stencil2D& rhs) const {
  Stencil2D out = *this;
  for (const auto& [o, v] : rhs.coeff) out.coeff[o] += v;
  return out;
}

Symmetry Stencil2D::classify() const {
  auto at = [this](int ox, int oy) {
    auto it = coeff.find({ox, oy});
    return it == coeff.end() ? 0.0 : it->second;
  };
  bool sym = true, skew = true;
  for (const auto& [o, v] : coeff) {
    const double mirror = at(-o.first, -o.second);
    if (mirror != v) sym = false;
    if (mirror != -v) skew = false;
  }
  if (sym) return Symmetry::symmetric;
  if (skew) return Symmetry::skew;
  return Symmetry::none;
}

}  // namespace hrom
