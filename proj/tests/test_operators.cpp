#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "operators.hpp"
#include "support/oracles.hpp"

using namespace hrom;

namespace {

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("periodic_d1 matches the stencil pattern for N=4, h=1") {
  const Grid1D g(4, 0.0, 4.0);
  REQUIRE(g.h == doctest::Approx(1.0));
  Eigen::MatrixXd expect(4, 4);
  expect << 0, 1, 0, -1, -1, 0, 1, 0, 0, -1, 0, 1, 1, 0, -1, 0;
  expect *= 0.5;
  CHECK(max_abs_diff(periodic_d1(g).dense(), expect) == 0.0);
}

TEST_CASE("periodic_d2 matches the stencil for N=3, h=1") {
  const Grid1D g(3, 0.0, 3.0);
  Eigen::MatrixXd expect(3, 3);
  expect << -2, 1, 1, 1, -2, 1, 1, 1, -2;
  CHECK(max_abs_diff(periodic_d2(g).dense(), expect) == 0.0);
}

TEST_CASE("constant states are annihilated") {
  const Grid1D g(17, -2.0, 3.0);
  const Eigen::VectorXd ones = Eigen::VectorXd::Constant(g.n, 3.25);
  CHECK(periodic_d1(g).apply(ones).cwiseAbs().maxCoeff() == 0.0);
  CHECK(periodic_d2(g).apply(ones).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-13));
  const SparseOperator d3 = d3_product(periodic_d1(g), periodic_d2(g));
  CHECK(d3.apply(ones).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("exact symmetry flags and zero row/column sums") {
  for (int n : {3, 4, 5, 6, 16, 64}) {
    const Grid1D g(n, -1.0, 1.0);
    const SparseOperator d1 = periodic_d1(g);
    const SparseOperator d2 = periodic_d2(g);
    const SparseOperator d3 = d3_product(d1, d2);
    CAPTURE(n);
    CHECK(d1.symmetry_residual() == 0.0);  // A + A^T
    CHECK(d2.symmetry_residual() == 0.0);  // A - A^T
    CHECK(d3.symmetry_residual() == 0.0);
    for (const auto* op : {&d1, &d2, &d3}) {
      const Eigen::MatrixXd d = op->dense();
      CHECK(d.rowwise().sum().cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(d.colwise().sum().cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("d1 derivative of a sine wave is second-order accurate") {
  const int n = 8;
  const Grid1D g(n, 0.0, 4.0);
  REQUIRE(g.h == doctest::Approx(0.5));
  Eigen::VectorXd u(n), du_exact(n);
  const double k = 2.0 * M_PI / (g.b - g.a);
  for (int i = 0; i < n; ++i) {
    u[i] = std::sin(k * g.node(i));
    du_exact[i] = k * std::cos(k * g.node(i));
  }
  // sparse apply agrees with the dense oracle construction bitwise
  const Eigen::VectorXd sparse_du = periodic_d1(g).apply(u);
  const Eigen::VectorXd dense_du = oracle::dense_d1(n, g.h) * u;
  CHECK((sparse_du - dense_du).cwiseAbs().maxCoeff() == 0.0);
  // and matches the analytic derivative to O(h^2)
  const double err_h = (sparse_du - du_exact).cwiseAbs().maxCoeff();
  CHECK(err_h < k * k * k * g.h * g.h);  // |u'''| h^2 / 6 bound with slack

  const Grid1D g2(2 * n, 0.0, 4.0);
  Eigen::VectorXd u2(2 * n), du2_exact(2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    u2[i] = std::sin(k * g2.node(i));
    du2_exact[i] = k * std::cos(k * g2.node(i));
  }
  const double err_h2 = (periodic_d1(g2).apply(u2) - du2_exact).cwiseAbs().maxCoeff();
  CHECK(err_h / err_h2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("d2 is negative semidefinite (N=16 dense eigen-oracle)") {
  const Grid1D g(16, 0.0, 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(periodic_d2(g).dense());
  CHECK(es.eigenvalues().maxCoeff() <= 1e-10);
}

TEST_CASE("d3 product equals the dense matrix product exactly") {
  for (int n : {4, 6}) {  // n=4 exercises wrap aliasing of the +-2 offsets
    const Grid1D g(n, 0.0, static_cast<double>(n));
    const Eigen::MatrixXd expect = oracle::dense_d1(n, g.h) * oracle::dense_d2(n, g.h);
    const SparseOperator d3 = d3_product(periodic_d1(g), periodic_d2(g));
    CAPTURE(n);
    CHECK(max_abs_diff(d3.dense(), expect) == 0.0);
  }
}

TEST_CASE("d3 rejects mismatched or non-circulant operands") {
  const Grid1D g5(5, 0.0, 1.0), g6(6, 0.0, 1.0);
  CHECK_THROWS_AS(d3_product(periodic_d1(g5), periodic_d2(g6)), Error);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid1D(2, 0.0, 1.0), Error);
  CHECK_THROWS_AS(Grid1D(8, 1.0, 1.0), Error);
  CHECK_THROWS_AS(Grid2D(2, 8, 0, 1, 0, 1), Error);
}

TEST_CASE("kron_2d operators match dense Kronecker oracles") {
  const Grid2D g(3, 3, 0.0, 3.0, 0.0, 6.0);
  const Operators2D ops = kron_2d(g);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd d1x = oracle::dense_d1(3, g.hx);
  const Eigen::MatrixXd d2x = oracle::dense_d2(3, g.hx);
  const Eigen::MatrixXd d2y = oracle::dense_d2(3, g.hy);

  CHECK(max_abs_diff(ops.dx.dense(), oracle::dense_kron(d1x, eye)) == 0.0);
  CHECK(max_abs_diff(ops.dxx.dense(), oracle::dense_kron(d2x, eye)) == 0.0);
  CHECK(max_abs_diff(ops.dyy.dense(), oracle::dense_kron(eye, d2y)) == 0.0);
  CHECK(max_abs_diff(ops.dxxx.dense(), oracle::dense_kron(d1x, eye) * oracle::dense_kron(d2x, eye)) ==
        0.0);
  CHECK(max_abs_diff(ops.dxyy.dense(), oracle::dense_kron(d1x, eye) * oracle::dense_kron(eye, d2y)) ==
        0.0);

  for (const auto* op : {&ops.dx, &ops.dxx, &ops.dyy, &ops.dxxx, &ops.dxyy}) {
    CHECK(op->rows() == 9);
    CHECK(op->cols() == 9);
    CHECK(op->symmetry_residual() == 0.0);
  }
}

TEST_CASE("dx annihilates fields constant in x") {
  const Grid2D g(5, 7, 0.0, 1.0, 0.0, 1.0);
  const Operators2D ops = kron_2d(g);
  Eigen::VectorXd u(g.size());
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) u[g.index(i, j)] = std::sin(2.0 * M_PI * g.y_node(j));
  CHECK(ops.dx.apply(u).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sparse apply equals the dense mat-vec to 0 ULP") {
  std::mt19937_64 gen(42);
  for (int n : {5, 16, 33, 64}) {
    const Grid1D g(n, -1.0, 2.0);
    const Eigen::VectorXd x = oracle::random_vector(n, gen, 2.0);
    for (const SparseOperator& op :
         {periodic_d1(g), periodic_d2(g), d3_product(periodic_d1(g), periodic_d2(g))}) {
      const Eigen::MatrixXd dense = op.dense();
      Eigen::VectorXd y_dense(n);
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += dense(i, j) * x[j];
        y_dense[i] = s;
      }
      const Eigen::VectorXd y = op.apply(x);
      CAPTURE(n);
      CHECK((y - y_dense).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}
