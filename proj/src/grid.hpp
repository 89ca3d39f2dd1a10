#pragma once

#include <string>
#include <variant>
#include <vector>

#include "error.hpp"

namespace hrom {

// Uniform periodic mesh on [a,b): node x_i = a + i*h, i = 0..n-1, h = (b-a)/n.
// The wrap node x_n is identified with x_0.
struct Grid1D {
  int n = 0;
  double a = 0.0;
  double b = 0.0;
  double h = 0.0;

  Grid1D() = default;
  Grid1D(int n_, double a_, double b_) : n(n_), a(a_), b(b_) {
    if (n < 3) fail(ErrorCode::invalid_argument, "Grid1D: need at least 3 nodes, got " + std::to_string(n));
    if (!(b > a)) fail(ErrorCode::invalid_argument, "Grid1D: domain end must exceed start");
    h = (b - a) / static_cast<double>(n);
  }

  double node(int i) const { return a + h * static_cast<double>(i); }

  std::vector<double> nodes() const {
    std::vector<double> x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = node(i);
    return x;
  }
};

// Periodic tensor mesh on [a,b) x [c,d).
// State ordering is x-major blocks of length ny: (i,j) lives at i*ny + j.
struct Grid2D {
  int nx = 0, ny = 0;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  double hx = 0.0, hy = 0.0;

  Grid2D() = default;
  Grid2D(int nx_, int ny_, double a_, double b_, double c_, double d_)
      : nx(nx_), ny(ny_), a(a_), b(b_), c(c_), d(d_) {
    if (nx < 3 || ny < 3)
      fail(ErrorCode::invalid_argument, "Grid2D: need at least 3 nodes per direction");
    if (!(b > a) || !(d > c)) fail(ErrorCode::invalid_argument, "Grid2D: empty domain");
    hx = (b - a) / static_cast<double>(nx);
    hy = (d - c) / static_cast<double>(ny);
  }

  int size() const { return nx * ny; }
  int index(int i, int j) const { return i * ny + j; }
  double x_node(int i) const { return a + hx * static_cast<double>(i); }
  double y_node(int j) const { return c + hy * static_cast<double>(j); }
};

using GridVariant = std::variant<Grid1D, Grid2D>;

inline bool is_2d(const GridVariant& g) { return std::holds_alternative<Grid2D>(g); }

// Quadrature weight of one node: dx in 1D, dx*dy in 2D.
inline double mesh_weight(const GridVariant& g) {
  if (auto* g1 = std::get_if<Grid1D>(&g)) return g1->h;
  const auto& g2 = std::get<Grid2D>(g);
  return g2.hx * g2.hy;
}

}  // namespace hrom
