#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"

namespace hrom {

struct RsvdOptions {
  int oversample = 10;
  int power_iterations = 2;
  std::uint64_t seed = 0;
};

struct SvdResult {
  Eigen::MatrixXd left;    // orthonormal columns
  Eigen::VectorXd sigma;   // nonincreasing
  Eigen::MatrixXd right;   // columns are right singular vectors
};

// Range-finder randomized SVD (Gaussian sketch, power iterations with
// re-orthonormalization, small-matrix SVD). Deterministic for a fixed seed:
// the Gaussian samples come from mt19937_64 + Box-Muller, not from the
// platform's std::normal_distribution.
SvdResult randomized_svd(const Eigen::Ref<const Eigen::MatrixXd>& M, int rank,
                         const RsvdOptions& opt = {});

// Relative information content, in percent, for each n = 1..size.
Eigen::VectorXd ric_curve(const Eigen::Ref<const Eigen::VectorXd>& sigma);

// Smallest n with RIC(n) >= threshold (percent).
int ric_select(const Eigen::Ref<const Eigen::VectorXd>& sigma, double threshold = 99.99);

enum class BasisMode { monolithic, per_field };
enum class SvdMethod { automatic, full, randomized };

struct BasisOptions {
  BasisMode mode = BasisMode::monolithic;
  std::optional<int> num_modes;      // fixed mode count per block; otherwise RIC threshold
  double ric_threshold = 99.99;
  SvdMethod method = SvdMethod::automatic;
  RsvdOptions rsvd{};
  int max_rank = 150;                // randomized path computes this many modes
  int full_cutoff = 1200;            // automatic: full SVD when min(dims) <= cutoff
};

// Orthonormal reduction basis, one block per field (block-diagonal as a whole).
class Basis {
public:
  struct Block {
    std::string field;
    int full_offset = 0;
    int reduced_offset = 0;
    Eigen::MatrixXd modes;     // field_dim x n_block
    Eigen::VectorXd spectrum;  // singular values retained from the SVD
  };

  Basis() = default;
  Basis(std::vector<Block> blocks, int full_dim);

  const std::vector<Block>& blocks() const { return blocks_; }
  int full_dim() const { return full_dim_; }
  int total_modes() const { return total_modes_; }

  Eigen::VectorXd lift(const Eigen::Ref<const Eigen::VectorXd>& qr) const;
  Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& q) const;

  // Block-diagonal assembly as a dense full_dim x total_modes matrix.
  const Eigen::MatrixXd& assembled() const;

  // Leading n_block modes of every block (n <= each block's mode count).
  Basis truncated(int n_per_block) const;

private:
  std::vector<Block> blocks_;
  int full_dim_ = 0;
  int total_modes_ = 0;
  mutable Eigen::MatrixXd assembled_;  // built lazily
  mutable bool assembled_ready_ = false;
};

// Builds the POD basis from snapshot columns. per_field computes one SVD per
// field block and assembles block-diagonally; monolithic stacks all fields.
Basis build_basis(const Eigen::Ref<const Eigen::MatrixXd>& snapshots, const FieldLayout& layout,
                  const BasisOptions& opt);

}  // namespace hrom
