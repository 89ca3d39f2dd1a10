#pragma once

namespace hrom {

// Closed-form two-soliton solution of u_t + u u_x + u_xxx = 0 in Hirota form,
// u = 12 (log F)_xx with F = 1 + e^{xi1} + e^{xi2} + rho^2 e^{xi1+xi2},
// xi_i = k_i x - k_i^3 t + phase_i, rho = (k1-k2)/(k1+k2).
// As |t| -> inf the profile separates into sech^2 pulses of heights 3 k_i^2.
struct TwoSolitonParams {
  double k1 = 0.4;
  double k2 = 0.6;
  double phase1 = 4.0;
  double phase2 = 15.0;

  double rho() const { return (k1 - k2) / (k1 + k2); }
};

// Evaluation shifts all exponentials so arbitrarily large |xi| stay finite.
double exact_two_soliton(double x, double t, const TwoSolitonParams& p = {});

}  // namespace hrom
