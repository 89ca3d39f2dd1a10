// Command-line driver. Talks to the core exclusively through the C API in
// include/hrom.h; exit codes: 0 ok, 2 config error, 3 numerical failure,
// 4 missing input, 1 anything else.
#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <json.hpp>
#include <optional>
#include <string>

#include "hrom.h"

namespace {

int exit_code_of(hrom_status s) {
  switch (s) {
    case HROM_OK: return 0;
    case HROM_ERR_CONFIG: return 2;
    case HROM_ERR_NUMERIC: return 3;
    case HROM_ERR_MISSING_INPUT: return 4;
    default: return 1;
  }
}

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<std::string> path;
};

void add_common(CLI::App* sub, CommonArgs& args, bool with_path) {
  sub->add_option("--config", args.config, "experiment configuration (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", args.seed, "override the random seed");
  sub->add_option("--out", args.out, "output directory (HROM_OUT env overrides this)");
  sub->add_option("--threads", args.threads, "worker count for offline stages")
      ->check(CLI::PositiveNumber);
  if (with_path)
    sub->add_option("--path", args.path, "reduced evaluation path")
        ->check(CLI::IsMember({"tensorial", "lifted", "both"}));
}

int dispatch(const std::string& name, const CommonArgs& args) {
  nlohmann::json overrides;
  if (args.seed) overrides["seed"] = *args.seed;
  if (args.out) overrides["out"] = *args.out;
  if (args.threads) overrides["threads"] = *args.threads;
  if (args.path) overrides["path"] = *args.path;
  const std::string ov = overrides.dump();

  const hrom_status st = hrom_run(name.c_str(), args.config.c_str(), ov.c_str());
  if (st != HROM_OK)
    std::fprintf(stderr, "hrom %s: %s: %s\n", name.c_str(), hrom_status_name(st),
                 hrom_last_error());
  return exit_code_of(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hrom - structure-preserving model reduction for KdV-type equations"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    bool with_path;
  };
  const Sub subs[] = {
      {"fom", "integrate the full-order model and write snapshots + invariants", false},
      {"basis", "build the POD basis from stored snapshots", false},
      {"rom", "reduce the model and integrate the reduced system", true},
      {"compare", "error report of a reduced run against stored snapshots", true},
      {"eoc", "two-soliton refinement ladder against the exact solution", false},
      {"bench", "offline/online timing report", false},
  };

  CommonArgs args[6];
  std::string chosen;
  for (size_t i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(sub, args[i], subs[i].with_path);
    sub->callback([&, i] { chosen = subs[i].name; });
  }

  CLI11_PARSE(app, argc, argv);

  for (size_t i = 0; i < 6; ++i)
    if (chosen == subs[i].name) return dispatch(chosen, args[i]);
  return 1;
}
