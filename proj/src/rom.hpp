#pragma once

#include "integrator.hpp"
#include "pod.hpp"

namespace hrom {

// Builds C = W (V_a kron V_b) without forming W or the Kronecker product:
// row i of C is V_a(i,:) kron V_b(i,:), so C (qa kron qb) = (V_a qa) (.) (V_b qb).
// Computed as one batched pass over column pairs; peak memory is C itself.
Eigen::MatrixXd reduced_quadratic_tensor(const Eigen::Ref<const Eigen::MatrixXd>& Va,
                                         const Eigen::Ref<const Eigen::MatrixXd>& Vb);

enum class RomPath { tensorial, lifted };

// Galerkin reduction of a skew-gradient model that keeps the skew-gradient
// structure: qr' = S_hat (L_hat qr + sum_t W_t (qr_a kron qr_b)).
// The tensorial right-hand side is evaluated entirely in reduced coordinates;
// the lifted path re-evaluates the full gradient each call and is kept as the
// online-cost baseline.
class ReducedModel {
public:
  struct TensorTerm {
    Eigen::MatrixXd w;  // n_out x (n_a * n_b), gradient coefficient included
    int a_off = 0, a_n = 0;
    int b_off = 0, b_n = 0;
    int out_off = 0, out_n = 0;
  };

  int dim() const { return n_; }
  double weight() const { return model_.weight(); }
  const Eigen::MatrixXd& skew() const { return s_hat_; }
  const Eigen::MatrixXd& lin_grad() const { return l_hat_; }
  const std::vector<TensorTerm>& tensor_terms() const { return terms_; }
  const SkewGradientModel& model() const { return model_; }
  const Basis& basis() const { return basis_; }

  void gradient(const Eigen::Ref<const Eigen::VectorXd>& qr, Eigen::Ref<Eigen::VectorXd> g) const;
  void rhs_tensorial(const Eigen::Ref<const Eigen::VectorXd>& qr, Eigen::Ref<Eigen::VectorXd> out) const;
  void rhs_lifted(const Eigen::Ref<const Eigen::VectorXd>& qr, Eigen::Ref<Eigen::VectorXd> out) const;
  void jacobian_tensorial(const Eigen::Ref<const Eigen::VectorXd>& qr, Eigen::MatrixXd& out) const;
  void jacobian_lifted(const Eigen::Ref<const Eigen::VectorXd>& qr, Eigen::MatrixXd& out) const;

  Eigen::VectorXd lift(const Eigen::Ref<const Eigen::VectorXd>& qr) const { return basis_.lift(qr); }
  double hamiltonian(const Eigen::Ref<const Eigen::VectorXd>& qr) const;
  InvariantSet invariants(const Eigen::Ref<const Eigen::VectorXd>& qr) const;

private:
  friend ReducedModel reduce(const SkewGradientModel&, const Basis&);

  SkewGradientModel model_;
  Basis basis_;
  int n_ = 0;
  Eigen::MatrixXd s_hat_, l_hat_;
  std::vector<TensorTerm> terms_;
  // field -> rows of the assembled basis, for the lifted Jacobian
  struct FieldMap {
    int full_offset, full_size, reduced_offset, reduced_size;
  };
  std::vector<FieldMap> field_map_;
};

ReducedModel reduce(const SkewGradientModel& model, const Basis& basis);

inline Eigen::VectorXd lift(const Basis& basis, const Eigen::Ref<const Eigen::VectorXd>& qr) {
  return basis.lift(qr);
}

// Dense-system adapters so the Kahan stepper drives reduced models unchanged.
class RomTensorialSystem final : public DenseQuadraticSystem, public PolarizedSystem {
public:
  explicit RomTensorialSystem(const ReducedModel& rm) : rm_(rm) {}
  int dim() const override { return rm_.dim(); }
  void rhs(const Eigen::VectorXd& q, Eigen::VectorXd& out) const override {
    out.resize(rm_.dim());
    rm_.rhs_tensorial(q, out);
  }
  void jacobian(const Eigen::VectorXd& q, Eigen::MatrixXd& out) const override {
    rm_.jacobian_tensorial(q, out);
  }
  void linear_rhs(const Eigen::VectorXd& q, Eigen::VectorXd& out) const override;
  void quadratic_polarized(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                           Eigen::VectorXd& out) const override;

private:
  const ReducedModel& rm_;
};

class RomLiftedSystem final : public DenseQuadraticSystem {
public:
  explicit RomLiftedSystem(const ReducedModel& rm) : rm_(rm) {}
  int dim() const override { return rm_.dim(); }
  void rhs(const Eigen::VectorXd& q, Eigen::VectorXd& out) const override {
    out.resize(rm_.dim());
    rm_.rhs_lifted(q, out);
  }
  void jacobian(const Eigen::VectorXd& q, Eigen::MatrixXd& out) const override {
    rm_.jacobian_lifted(q, out);
  }

private:
  const ReducedModel& rm_;
};

Trajectory integrate_reduced(const ReducedModel& rm, const Eigen::VectorXd& qr0,
                             const TimeMesh& mesh, RomPath path, const IntegrateOptions& opt = {});

double modified_hamiltonian(const ReducedModel& rm, const Eigen::VectorXd& qr, double dt);

}  // namespace hrom
