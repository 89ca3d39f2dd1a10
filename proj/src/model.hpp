#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "operators.hpp"

namespace hrom {

enum class ModelKind { single_kdv, coupled_kdv, zakharov_kuznetsov };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

struct ModelParams {
  double alpha = 0.0;
  double mu = 0.0;
};

struct FieldLayout {
  struct Field {
    std::string name;
    int offset = 0;
    int size = 0;
  };
  std::vector<Field> fields;
  int total = 0;

  int index_of(const std::string& name) const;
};

// One quadratic term of the Hamiltonian gradient:
//   grad[out] += coeff * (q_a (.) q_b)
// where (.) is the elementwise product of the two field blocks. The three
// KdV-type models only need scalar coefficient operators.
struct QuadGradTerm {
  double coeff = 0.0;
  int a = 0;
  int b = 0;
  int out = 0;
};

struct InvariantSet {
  double hamiltonian = 0.0;
  double momentum = 0.0;      // I1
  double mass = 0.0;          // I2
  std::optional<double> mass2;  // I3, coupled model only

  std::vector<double> values() const;
};

// Semi-discrete skew-gradient system q' = S * gradH(q) with
//   gradH(q) = L q + sum_t coeff_t (q_a (.) q_b).
// gradH is the gradient in the mesh-weighted inner product, so L and the
// quadratic coefficients carry no dx factors (the Euclidean gradient of the
// discrete Hamiltonian equals weight() * gradH).
class SkewGradientModel {
public:
  SkewGradientModel() = default;  // empty shell; assemble() produces usable models
  static SkewGradientModel assemble(ModelKind kind, const ModelParams& params, const GridVariant& grid);

  ModelKind kind() const { return kind_; }
  const ModelParams& params() const { return params_; }
  const GridVariant& grid() const { return grid_; }
  const FieldLayout& layout() const { return layout_; }
  int dim() const { return layout_.total; }
  double weight() const { return weight_; }

  const SparseOperator& skew() const { return S_; }
  const SparseOperator& lin_grad() const { return L_; }
  const std::vector<QuadGradTerm>& quad_terms() const { return quad_; }

  void gradient(const Eigen::Ref<const Eigen::VectorXd>& q, Eigen::Ref<Eigen::VectorXd> g) const;
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& q) const;
  void rhs(const Eigen::Ref<const Eigen::VectorXd>& q, Eigen::Ref<Eigen::VectorXd> out) const;
  Eigen::VectorXd rhs(const Eigen::Ref<const Eigen::VectorXd>& q) const;

  // Hessian of H (weighted convention): G(q) = L + sum_t coeff_t (diag(q_b) P_a + diag(q_a) P_b).
  Eigen::MatrixXd gradient_jacobian_dense(const Eigen::Ref<const Eigen::VectorXd>& q) const;
  // f'(q) = S * G(q); dense variant for small systems and oracles.
  Eigen::MatrixXd jacobian_dense(const Eigen::Ref<const Eigen::VectorXd>& q) const;

  double hamiltonian(const Eigen::Ref<const Eigen::VectorXd>& q) const;
  // Sum of |term| magnitudes of the discrete Hamiltonian: the energy scale of
  // a state even when cancellations drive H itself to zero (the coupled model
  // starts at H = 0 exactly whenever u = 0).
  double hamiltonian_scale(const Eigen::Ref<const Eigen::VectorXd>& q) const;
  InvariantSet invariants(const Eigen::Ref<const Eigen::VectorXd>& q) const;
  std::vector<std::string> invariant_names() const;

private:
  void check_dim(Eigen::Index n) const;

  ModelKind kind_ = ModelKind::single_kdv;
  ModelParams params_;
  GridVariant grid_;
  FieldLayout layout_;
  double weight_ = 0.0;
  SparseOperator S_;
  SparseOperator L_;
  std::vector<QuadGradTerm> quad_;
};

// --- initial conditions ------------------------------------------------------

struct OneSolitonIc {
  double beta = 1.5;
};

struct TwoSolitonIc {
  double k1 = 0.4, k2 = 0.6;
  double phase1 = 4.0, phase2 = 15.0;
};

// Coupled model: u = 0, v = amplitude * exp(-(x-center)^2/width).
struct GaussianIc {
  double amplitude = 0.3;
  double center = -100.0;
  double width = 25.0;
};

struct ZkTwoPulseIc {
  struct Pulse {
    double c = 1.0;  // wave velocity
    double x = 0.0, y = 0.0;  // peak location
  };
  std::vector<Pulse> pulses;
  std::vector<double> a2m;  // cos-expansion coefficients, externally supplied
};

using IcSpec = std::variant<OneSolitonIc, TwoSolitonIc, GaussianIc, ZkTwoPulseIc>;

Eigen::VectorXd initial_condition(const SkewGradientModel& model, const IcSpec& ic);

}  // namespace hrom
