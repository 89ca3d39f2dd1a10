#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "config.hpp"

namespace hrom {

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<std::string> rom_path;
};

// Experiment pipeline behind the CLI subcommands. Each stage writes its
// artifacts under the configured output directory and returns the summary it
// persisted (summaries carry no wall-clock values except for `bench`).
nlohmann::json run_fom(const ExperimentConfig& c);
nlohmann::json run_basis(const ExperimentConfig& c);
nlohmann::json run_rom(const ExperimentConfig& c);
nlohmann::json run_compare(const ExperimentConfig& c);
nlohmann::json run_eoc(const ExperimentConfig& c);
nlohmann::json run_bench(const ExperimentConfig& c);

// Loads the config, applies overrides (HROM_OUT wins over the out_dir
// override), dispatches the subcommand.
nlohmann::json run_subcommand(const std::string& subcommand, const std::string& config_path,
                              const RunOverrides& overrides = {});

}  // namespace hrom
