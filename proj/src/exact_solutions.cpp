#include "exact_solutions.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace hrom {

double exact_two_soliton(double x, double t, const TwoSolitonParams& p) {
  if (p.k1 + p.k2 == 0.0)
    fail(ErrorCode::invalid_argument, "exact_two_soliton: k1 = -k2 is degenerate");
  const double rho = p.rho();
  const double rho2 = rho * rho;
  const double k1sq = p.k1 * p.k1;
  const double k2sq = p.k2 * p.k2;
  const double xi1 = p.k1 * x - k1sq * p.k1 * t + p.phase1;
  const double xi2 = p.k2 * x - k2sq * p.k2 * t + p.phase2;

  // Shift every exponent by g so that each term of F is <= 1; numerator
  // exponents then stay bounded by -log(rho^2).
  double g = std::max({0.0, xi1, xi2});
  if (rho2 > 0.0) g = std::max(g, xi1 + xi2 + std::log(rho2));

  const double F = std::exp(-g) + std::exp(xi1 - g) + std::exp(xi2 - g) +
                   rho2 * std::exp(xi1 + xi2 - g);

  const double dk = p.k2 - p.k1;
  double num = k1sq * std::exp(xi1 - 2.0 * g) + k2sq * std::exp(xi2 - 2.0 * g) +
               2.0 * dk * dk * std::exp(xi1 + xi2 - 2.0 * g);
  if (rho2 > 0.0)
    num += rho2 * (k2sq * std::exp(2.0 * xi1 + xi2 - 2.0 * g) +
                   k1sq * std::exp(xi1 + 2.0 * xi2 - 2.0 * g));

  return 12.0 * num / (F * F);
}

}  // namespace hrom
