#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <random>

#include "pod.hpp"
#include "support/oracles.hpp"

using namespace hrom;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = 2.0 * oracle::uniform01(gen) - 1.0;
  return m;
}

FieldLayout single_layout(int n) {
  FieldLayout l;
  l.fields = {{"u", 0, n}};
  l.total = n;
  return l;
}

FieldLayout coupled_layout(int n) {
  FieldLayout l;
  l.fields = {{"u", 0, n}, {"v", n, n}};
  l.total = 2 * n;
  return l;
}

}  // namespace

TEST_CASE("rank-1 matrix collapses to one singular value") {
  std::mt19937_64 gen(5);
  const Eigen::VectorXd a = oracle::random_vector(60, gen);
  const Eigen::VectorXd b = oracle::random_vector(25, gen);
  const Eigen::MatrixXd m = a * b.transpose();
  const SvdResult res = randomized_svd(m, 5, {.oversample = 5, .power_iterations = 2, .seed = 9});
  for (int k = 1; k < 5; ++k) CHECK(res.sigma[k] <= 1e-12 * res.sigma[0]);
  CHECK((res.left.transpose() * res.left - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("rsvd tracks the full SVD on a random 200x100 matrix") {
  const Eigen::MatrixXd m = random_matrix(200, 100, 31);
  const int k = 20;
  const SvdResult res = randomized_svd(m, k, {.oversample = 10, .power_iterations = 2, .seed = 7});
  Eigen::BDCSVD<Eigen::MatrixXd> full(m, Eigen::ComputeThinU | Eigen::ComputeThinV);

  // Low-rank residual within 10x of the optimal sigma_{k+1}.
  const Eigen::MatrixXd approx =
      res.left * res.sigma.asDiagonal() * res.right.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> resid(m - approx);
  CHECK(resid.singularValues()[0] < 10.0 * full.singularValues()[k]);

  // Deterministic for a fixed seed.
  const SvdResult res2 = randomized_svd(m, k, {.oversample = 10, .power_iterations = 2, .seed = 7});
  CHECK((res.left - res2.left).cwiseAbs().maxCoeff() == 0.0);
  CHECK((res.sigma - res2.sigma).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rsvd singular values are within 1 percent on a decaying spectrum") {
  // Snapshot-type spectra decay; build one explicitly from orthonormal factors.
  std::mt19937_64 gen(33);
  const int rows = 180, cols = 90, k = 25;
  const Eigen::MatrixXd u = oracle::random_orthonormal(rows, cols, gen);
  const Eigen::MatrixXd v = oracle::random_orthonormal(cols, cols, gen);
  Eigen::VectorXd sv(cols);
  for (int i = 0; i < cols; ++i) sv[i] = std::exp(-0.15 * i);
  const Eigen::MatrixXd m = u * sv.asDiagonal() * v.transpose();

  const SvdResult res = randomized_svd(m, k, {.oversample = 10, .power_iterations = 2, .seed = 13});
  for (int i = 0; i < k; ++i) CHECK(res.sigma[i] == doctest::Approx(sv[i]).epsilon(0.01));
}

TEST_CASE("rsvd rejects out-of-range ranks") {
  const Eigen::MatrixXd m = random_matrix(30, 10, 3);
  CHECK_THROWS_AS(randomized_svd(m, 11, {}), Error);
  CHECK_THROWS_AS(randomized_svd(m, 0, {}), Error);
}

TEST_CASE("ric selection") {
  SUBCASE("sigma = (4,3): 64 percent then 100 percent") {
    Eigen::VectorXd s(2);
    s << 4.0, 3.0;
    const Eigen::VectorXd curve = ric_curve(s);
    CHECK(curve[0] == doctest::Approx(64.0));
    CHECK(curve[1] == doctest::Approx(100.0));
    CHECK(ric_select(s, 99.99) == 2);
    CHECK(ric_select(s, 60.0) == 1);
  }
  SUBCASE("sigma = (1,0,0) needs one mode") {
    Eigen::VectorXd s(3);
    s << 1.0, 0.0, 0.0;
    CHECK(ric_select(s, 99.99) == 1);
  }
  SUBCASE("monotone, reaches 100 at full rank") {
    std::mt19937_64 gen(13);
    Eigen::VectorXd s(20);
    for (int i = 0; i < 20; ++i) s[i] = std::exp(-0.3 * i) * (1.0 + 0.1 * oracle::uniform01(gen));
    std::sort(s.data(), s.data() + 20, std::greater<double>());
    const Eigen::VectorXd curve = ric_curve(s);
    for (int i = 1; i < 20; ++i) CHECK(curve[i] >= curve[i - 1]);
    CHECK(curve[19] == doctest::Approx(100.0).epsilon(1e-12));
  }
  SUBCASE("zero spectrum is rejected") {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS(ric_select(s, 99.99), Error);
    CHECK_THROWS_AS(ric_curve(Eigen::VectorXd()), Error);
  }
}

TEST_CASE("basis from snapshots spanning a 2-dim subspace") {
  std::mt19937_64 gen(17);
  const int n = 40;
  const Eigen::VectorXd a = oracle::random_vector(n, gen);
  const Eigen::VectorXd b = oracle::random_vector(n, gen);
  Eigen::MatrixXd snaps(n, 12);
  for (int k = 0; k < 12; ++k)
    snaps.col(k) = std::sin(0.3 * k) * a + std::cos(0.7 * k) * b;

  BasisOptions opt;
  opt.method = SvdMethod::full;
  const Basis basis = build_basis(snaps, single_layout(n), opt);
  CHECK(basis.total_modes() == 2);
  CHECK(ric_select(basis.blocks()[0].spectrum, 99.99) == 2);

  BasisOptions fixed = opt;
  fixed.num_modes = 5;  // beyond rank 2
  CHECK_THROWS_AS(build_basis(snaps, single_layout(n), fixed), Error);
}

TEST_CASE("per-field basis is block diagonal with zero cross-field entries") {
  const int n = 30;
  const Eigen::MatrixXd snaps = random_matrix(2 * n, 40, 23);
  BasisOptions opt;
  opt.mode = BasisMode::per_field;
  opt.num_modes = 4;
  opt.method = SvdMethod::full;
  const Basis basis = build_basis(snaps, coupled_layout(n), opt);
  REQUIRE(basis.blocks().size() == 2);
  CHECK(basis.total_modes() == 8);
  const Eigen::MatrixXd v = basis.assembled();
  CHECK(v.block(0, 4, n, 4).cwiseAbs().maxCoeff() == 0.0);
  CHECK(v.block(n, 0, n, 4).cwiseAbs().maxCoeff() == 0.0);
  // orthonormal per block
  CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("snapshot reconstruction error equals the tail energy (full SVD path)") {
  const Eigen::MatrixXd snaps = random_matrix(50, 30, 29);
  BasisOptions opt;
  opt.method = SvdMethod::full;
  opt.num_modes = 10;
  const Basis basis = build_basis(snaps, single_layout(50), opt);
  const Eigen::MatrixXd v = basis.assembled();
  const double err2 = (snaps - v * (v.transpose() * snaps)).squaredNorm();
  const Eigen::VectorXd sigma = basis.blocks()[0].spectrum;
  double tail = 0.0;
  for (int k = 10; k < sigma.size(); ++k) tail += sigma[k] * sigma[k];
  CHECK(err2 == doctest::Approx(tail).epsilon(1e-10));
}

TEST_CASE("lift and project round-trip on the retained subspace") {
  const Eigen::MatrixXd snaps = random_matrix(64, 20, 37);
  BasisOptions opt;
  opt.method = SvdMethod::full;
  opt.num_modes = 6;
  const Basis basis = build_basis(snaps, single_layout(64), opt);
  std::mt19937_64 gen(41);
  const Eigen::VectorXd qr = oracle::random_vector(6, gen);
  const Eigen::VectorXd q = basis.lift(qr);
  CHECK(q.norm() == doctest::Approx(qr.norm()).epsilon(1e-13));
  CHECK((basis.project(q) - qr).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("truncated basis keeps leading modes") {
  const Eigen::MatrixXd snaps = random_matrix(40, 25, 43);
  BasisOptions opt;
  opt.method = SvdMethod::full;
  opt.num_modes = 8;
  const Basis basis = build_basis(snaps, single_layout(40), opt);
  const Basis small = basis.truncated(3);
  CHECK(small.total_modes() == 3);
  CHECK((small.blocks()[0].modes - basis.blocks()[0].modes.leftCols(3)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK_THROWS_AS(basis.truncated(9), Error);
}
