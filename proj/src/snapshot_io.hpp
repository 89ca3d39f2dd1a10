#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <json.hpp>
#include <string>

#include "integrator.hpp"
#include "pod.hpp"

namespace hrom {

// Binary matrix container:
//   magic "HROMSNP1" (8 bytes), version u32, rows u64, cols u64, dt f64,
//   stride u64, then cols columns of rows little-endian f64 values each
//   (column-major). A JSON sidecar lives next to it at <path>.json.
struct MatrixFile {
  Eigen::MatrixXd data;
  double dt = 0.0;
  std::uint64_t stride = 1;
  nlohmann::json sidecar;
};

void save_matrix(const std::string& path, const Eigen::Ref<const Eigen::MatrixXd>& m, double dt,
                 std::uint64_t stride, const nlohmann::json& sidecar);
MatrixFile load_matrix(const std::string& path);

void save_trajectory(const std::string& path, const Trajectory& traj, const nlohmann::json& meta);
Trajectory load_trajectory(const std::string& path, nlohmann::json* sidecar_out = nullptr);

// Basis persistence: <dir>/basis.json manifest plus one matrix container per
// field block (modes and retained spectrum).
void save_basis(const std::string& dir, const Basis& basis, const nlohmann::json& meta);
Basis load_basis(const std::string& dir, nlohmann::json* manifest_out = nullptr);

}  // namespace hrom
