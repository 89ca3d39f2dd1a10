#pragma once

#include "integrator.hpp"
#include "model.hpp"

namespace hrom {

// Dense-system view of a full-order model, for small instances and oracles.
class FomDenseSystem : public DenseQuadraticSystem {
public:
  explicit FomDenseSystem(const SkewGradientModel& m) : m_(m) {}
  int dim() const override { return m_.dim(); }
  void rhs(const Eigen::VectorXd& q, Eigen::VectorXd& out) const override {
    out.resize(m_.dim());
    m_.rhs(q, out);
  }
  void jacobian(const Eigen::VectorXd& q, Eigen::MatrixXd& out) const override {
    out = m_.jacobian_dense(q);
  }

private:
  const SkewGradientModel& m_;
};

// Polarized one-leg view of a full-order model:
//   Bl q        = S L q
//   Bq Qt(a,b)  = S sum_t coeff_t (a_at (.) b_bt + b_at (.) a_bt) / 2
class FomPolarizedSystem : public PolarizedSystem {
public:
  explicit FomPolarizedSystem(const SkewGradientModel& m) : m_(m) {}
  int dim() const override { return m_.dim(); }

  void linear_rhs(const Eigen::VectorXd& q, Eigen::VectorXd& out) const override {
    Eigen::VectorXd g(m_.dim());
    m_.lin_grad().apply(q, g);
    out.resize(m_.dim());
    m_.skew().apply(g, out);
  }

  void quadratic_polarized(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                           Eigen::VectorXd& out) const override {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m_.dim());
    for (const auto& t : m_.quad_terms()) {
      const auto& fa = m_.layout().fields[static_cast<size_t>(t.a)];
      const auto& fb = m_.layout().fields[static_cast<size_t>(t.b)];
      const auto& fo = m_.layout().fields[static_cast<size_t>(t.out)];
      g.segment(fo.offset, fo.size) +=
          0.5 * t.coeff *
          (a.segment(fa.offset, fa.size).cwiseProduct(b.segment(fb.offset, fb.size)) +
           b.segment(fa.offset, fa.size).cwiseProduct(a.segment(fb.offset, fb.size)));
    }
    out.resize(m_.dim());
    m_.skew().apply(g, out);
  }

private:
  const SkewGradientModel& m_;
};

}  // namespace hrom
