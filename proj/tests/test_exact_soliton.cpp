#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "exact_solutions.hpp"
#include "support/oracles.hpp"

using namespace hrom;

namespace {

// Residual of u_t + alpha u u_x + mu u_xxx at time t, sampled on an N-point
// grid over [a,b]; every derivative is a central difference of direct formula
// evaluations (O(h^2) in space, O(dt^2) in time with dt tied to h).
double pde_residual_max(int n, double a, double b, double t, const TwoSolitonParams& p) {
  const double h = (b - a) / n;
  const double dt = 0.5 * h;
  auto u = [&](double x, double tt) { return exact_two_soliton(x, tt, p); };
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = a + i * h;
    const double ut = (u(x, t + dt) - u(x, t - dt)) / (2.0 * dt);
    const double ux = (u(x + h, t) - u(x - h, t)) / (2.0 * h);
    const double uxxx =
        (u(x + 2 * h, t) - 2.0 * u(x + h, t) + 2.0 * u(x - h, t) - u(x - 2 * h, t)) /
        (2.0 * h * h * h);
    worst = std::max(worst, std::abs(ut + u(x, t) * ux + uxxx));  // alpha = mu = 1
  }
  return worst;
}

}  // namespace

TEST_CASE("default parameters follow the reference setup") {
  const TwoSolitonParams p;
  CHECK(p.k1 == 0.4);
  CHECK(p.k2 == 0.6);
  CHECK(p.rho() == doctest::Approx(-0.2));
  CHECK(p.phase1 == 4.0);
  CHECK(p.phase2 == 15.0);
}

TEST_CASE("the formula satisfies the KdV equation to O(h^2)") {
  const TwoSolitonParams p;
  // Solitons are inside [-40,40] at t=10; halving h must cut the residual ~4x.
  const double r_coarse = pde_residual_max(2048, -40.0, 40.0, 10.0, p);
  const double r_fine = pde_residual_max(4096, -40.0, 40.0, 10.0, p);
  CHECK(r_coarse < 1e-2);
  CHECK(r_coarse / r_fine == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("profile separates into sech^2 pulses of heights 3 k_i^2") {
  const TwoSolitonParams p;
  for (double t : {1.0e4, -1.0e4}) {
    // Scan windows centered on each soliton trajectory x = k_i^2 t - phase/k_i.
    auto peak_near = [&](double k, double phase) {
      const double center = k * k * t - phase / k;
      double best = 0.0, best_x = center;
      for (double x = center - 40.0; x <= center + 40.0; x += 0.01) {
        const double v = exact_two_soliton(x, t, p);
        if (v > best) {
          best = v;
          best_x = x;
        }
      }
      for (double x = best_x - 0.02; x <= best_x + 0.02; x += 1e-5)
        best = std::max(best, exact_two_soliton(x, t, p));
      return best;
    };
    const double peak1 = peak_near(p.k1, p.phase1);
    const double peak2 = peak_near(p.k2, p.phase2);
    CAPTURE(t);
    // Window around the slow soliton sees the fast one only as an exponentially
    // small tail; max over both windows covers both pulses.
    CHECK(std::max(peak1, peak2) == doctest::Approx(3.0 * p.k2 * p.k2).epsilon(1e-6));
    CHECK(std::min(peak1, peak2) == doctest::Approx(3.0 * p.k1 * p.k1).epsilon(1e-6));
  }
}

TEST_CASE("evaluation stays finite for extreme arguments") {
  const TwoSolitonParams p;
  for (double x : {-1e6, -1e3, 0.0, 1e3, 1e6}) {
    for (double t : {-1e8, -1e4, 0.0, 1e4, 1e8}) {
      const double u = exact_two_soliton(x, t, p);
      CAPTURE(x);
      CAPTURE(t);
      CHECK(std::isfinite(u));
      CHECK(u >= -1e-12);
      CHECK(u <= 3.0 * p.k2 * p.k2 * 1.5);
    }
  }
}

TEST_CASE("degenerate k1 = -k2 is rejected") {
  TwoSolitonParams p;
  p.k1 = 0.5;
  p.k2 = -0.5;
  CHECK_THROWS_AS(exact_two_soliton(0.0, 0.0, p), Error);
}
