// End-to-end exercise of the installed CLI binary (path passed as argv[1]):
// subcommand plumbing, exit codes, artifact layout, determinism of summaries.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

int run(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-hrom-binary>\n");
    return 2;
  }
  const std::string hrom = argv[1];
  const fs::path dir =
      fs::temp_directory_path() / ("hrom_cli_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  const fs::path out = dir / "out";
  const fs::path cfg_path = dir / "config.json";

  {
    nlohmann::json cfg = {
        {"model",
         {{"kind", "single_kdv"},
          {"alpha", 6.0},
          {"mu", 1.0},
          {"grid", {{"a", -10.0}, {"b", 10.0}, {"n", 256}}},
          {"initial_condition", {{"kind", "one_soliton"}, {"beta", 1.5}}}}},
        {"time", {{"t_final", 13.0}, {"dt", 0.01}}},
        {"basis", {{"mode", "per_field"}, {"num_modes", 30}, {"svd", {{"method", "full"}}}}},
        {"rom", {{"path", "both"}}},
        {"seed", 99},
        {"output_dir", out.string()}};
    std::ofstream f(cfg_path);
    f << cfg.dump(2);
  }

  const std::string base = hrom + " ";
  check(run(base + "fom --config " + cfg_path.string()) == 0, "fom exits 0");
  check(fs::exists(out / "snapshots.bin"), "snapshots.bin written");
  check(fs::exists(out / "snapshots.bin.json"), "snapshot sidecar written");
  check(fs::exists(out / "fom_invariants.csv"), "invariant series written");

  check(run(base + "basis --config " + cfg_path.string()) == 0, "basis exits 0");
  check(fs::exists(out / "basis/basis.json"), "basis manifest written");
  check(fs::exists(out / "spectrum.csv"), "spectrum written");

  check(run(base + "rom --config " + cfg_path.string()) == 0, "rom exits 0");
  check(fs::exists(out / "rom_traj_tensorial.bin"), "tensorial trajectory written");
  check(fs::exists(out / "rom_traj_lifted.bin"), "lifted trajectory written");
  check(fs::exists(out / "rom_ops/s_hat.bin"), "reduced operators written");

  check(run(base + "compare --config " + cfg_path.string()) == 0, "compare exits 0");
  check(fs::exists(out / "compare_summary.json"), "compare summary written");
  {
    const auto j = nlohmann::json::parse(slurp(out / "compare_summary.json"));
    const double err = j.at("reports").at(0).at("rel_l2_mean").get<double>();
    check(err >= 0.0 && err < 0.05, "compare error is sane (" + std::to_string(err) + ")");
    // cross-path agreement recorded by rom
    const auto rj = nlohmann::json::parse(slurp(out / "rom_summary.json"));
    check(rj.at("cross_path_max_abs_diff").get<double>() < 1e-10,
          "tensorial and lifted trajectories agree");
  }

  // determinism: re-running yields byte-identical summaries
  const std::string fom_summary = slurp(out / "fom_summary.json");
  const std::string cmp_summary = slurp(out / "compare_summary.json");
  check(run(base + "fom --config " + cfg_path.string()) == 0, "fom re-run exits 0");
  check(run(base + "compare --config " + cfg_path.string()) == 0, "compare re-run exits 0");
  check(slurp(out / "fom_summary.json") == fom_summary, "fom summary byte-identical on re-run");
  check(slurp(out / "compare_summary.json") == cmp_summary,
        "compare summary byte-identical on re-run");

  // exit codes: 2 config, 4 missing input
  {
    const fs::path bad = dir / "bad.json";
    std::ofstream f(bad);
    f << R"({"model": {"kind": "single_kdv"}})";
    f.close();
    check(run(base + "fom --config " + bad.string()) == 2, "schema violation exits 2");
    const fs::path empty_out = dir / "empty";
    check(run(base + "compare --config " + cfg_path.string() + " --out " + empty_out.string()) == 4,
          "missing inputs exit 4");
  }

  // hash refusal: tamper with the model, keep artifacts
  {
    nlohmann::json cfg = nlohmann::json::parse(slurp(cfg_path));
    cfg["model"]["alpha"] = 5.0;
    const fs::path tampered = dir / "tampered.json";
    std::ofstream f(tampered);
    f << cfg.dump(2);
    f.close();
    check(run(base + "compare --config " + tampered.string()) == 2,
          "config-hash mismatch exits 2");
  }

  // HROM_OUT overrides --out
  {
    const fs::path env_out = dir / "env_out";
    const std::string cmd = "HROM_OUT=" + env_out.string() + " " + base + "fom --config " +
                            cfg_path.string() + " --out " + (dir / "ignored").string();
    check(run(cmd) == 0, "fom with HROM_OUT exits 0");
    check(fs::exists(env_out / "snapshots.bin") && !fs::exists(dir / "ignored"),
          "HROM_OUT wins over --out");
  }

  // eoc on a tiny ladder
  {
    nlohmann::json cfg = {
        {"model",
         {{"kind", "single_kdv"},
          {"alpha", 1.0},
          {"mu", 1.0},
          {"grid", {{"a", -40.0}, {"b", 40.0}, {"n", 80}}},
          {"initial_condition", {{"kind", "two_soliton"}}}}},
        {"time", {{"t_final", 4.0}, {"dt", 0.1}}},
        {"eoc", {{"levels", 3}, {"coarsest_dx", 4.0}, {"coarsest_dt", 0.1}}},
        {"threads", 2},
        {"output_dir", (dir / "eoc_out").string()}};
    const fs::path eoc_cfg = dir / "eoc.json";
    std::ofstream f(eoc_cfg);
    f << cfg.dump(2);
    f.close();
    check(run(base + "eoc --config " + eoc_cfg.string()) == 0, "eoc exits 0");
    check(fs::exists(dir / "eoc_out/eoc.csv"), "eoc table written");
  }

  fs::remove_all(dir);
  if (g_failures == 0) std::printf("test_cli: all checks passed\n");
  return g_failures == 0 ? 0 : 1;
}
