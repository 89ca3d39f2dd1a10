#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>

#include "model.hpp"
#include "pod.hpp"

namespace hrom {

struct ModelConfig {
  ModelKind kind = ModelKind::single_kdv;
  double alpha = 0.0;
  double mu = 0.0;
  GridVariant grid;
  IcSpec ic;
  nlohmann::json canonical;  // normalized echo used for hashing
};

struct TimeConfig {
  double t_final = 0.0;
  std::int64_t steps = 0;
};

struct SnapshotsConfig {
  std::int64_t stride = 1;
  bool include_initial = false;
};

struct RomRunConfig {
  std::string path = "tensorial";  // tensorial | lifted | both
};

struct EocConfig {
  int levels = 6;
  double coarsest_dx = 4.0;
  double coarsest_dt = 0.5;
};

struct BenchConfig {
  int repetitions = 3;
  int num_modes = 30;
  std::int64_t steps = 1000;
  int scaled_dim_factor = 2;  // second run at factor * n nodes; 0 disables
};

struct ExperimentConfig {
  ModelConfig model;
  TimeConfig time;
  SnapshotsConfig snapshots;
  BasisOptions basis;
  RomRunConfig rom;
  std::optional<EocConfig> eoc;
  std::optional<BenchConfig> bench;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  int threads = 1;
};

// Parses and validates; error messages carry the JSON field path
// ("model.grid.n: expected integer >= 3").
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

BasisOptions parse_basis_options(const nlohmann::json& j, const std::string& path = "basis");
ModelConfig parse_model_config(const nlohmann::json& j, const std::string& path = "model");

SkewGradientModel make_model(const ModelConfig& mc);

// Hash over the model + time-mesh portion; stored in every artifact sidecar
// so downstream stages can refuse mismatched inputs.
std::string config_hash(const ExperimentConfig& c);

nlohmann::json ic_to_json(const IcSpec& ic);

}  // namespace hrom
