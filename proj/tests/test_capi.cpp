#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "hrom.h"

namespace {

const char* kSingleModel = R"({
  "kind": "single_kdv", "alpha": 6.0, "mu": 1.0,
  "grid": {"a": -10.0, "b": 10.0, "n": 128},
  "initial_condition": {"kind": "one_soliton", "beta": 1.5}
})";

const char* kCoupledModel = R"({
  "kind": "coupled_kdv",
  "grid": {"a": -30.0, "b": 30.0, "n": 96},
  "initial_condition": {"kind": "gaussian", "amplitude": 0.3, "center": 0.0, "width": 25.0}
})";

struct ModelHandle {
  hrom_model* m = nullptr;
  explicit ModelHandle(const char* json) { REQUIRE(hrom_model_create(json, &m) == HROM_OK); }
  ~ModelHandle() { hrom_model_free(m); }
};

}  // namespace

TEST_CASE("model creation, rhs and invariants") {
  ModelHandle h(kSingleModel);
  const int64_t n = hrom_model_dim(h.m);
  CHECK(n == 128);

  std::vector<double> q(n), f(n);
  REQUIRE(hrom_model_initial_state(h.m, q.data(), n) == HROM_OK);
  CHECK(*std::max_element(q.begin(), q.end()) == doctest::Approx(1.5).epsilon(1e-3));

  REQUIRE(hrom_model_rhs(h.m, q.data(), n, f.data()) == HROM_OK);

  double inv[4];
  int64_t count = 0;
  REQUIRE(hrom_model_invariants(h.m, q.data(), n, inv, 4, &count) == HROM_OK);
  CHECK(count == 3);
  CHECK(inv[2] == doctest::Approx(4.0 * std::sqrt(1.5)).epsilon(1e-3));  // mass of the soliton
}

TEST_CASE("error reporting carries messages and status codes") {
  hrom_model* m = nullptr;
  CHECK(hrom_model_create("{ not json", &m) == HROM_ERR_CONFIG);
  CHECK(std::strlen(hrom_last_error()) > 0);
  CHECK(hrom_model_create(nullptr, &m) == HROM_ERR_INVALID_ARG);
  CHECK(hrom_model_create(R"({"kind":"single_kdv","grid":{"a":0,"b":1,"n":2},
        "initial_condition":{"kind":"one_soliton","beta":1}})", &m) == HROM_ERR_CONFIG);

  ModelHandle h(kSingleModel);
  std::vector<double> buf(8);
  CHECK(hrom_model_initial_state(h.m, buf.data(), 8) == HROM_ERR_INVALID_ARG);
}

TEST_CASE("full pipeline through the C API: integrate, basis, rom, paths agree") {
  ModelHandle h(kCoupledModel);
  const int64_t n = hrom_model_dim(h.m);
  REQUIRE(n == 192);
  std::vector<double> q0(n);
  REQUIRE(hrom_model_initial_state(h.m, q0.data(), n) == HROM_OK);

  hrom_trajectory* traj = nullptr;
  REQUIRE(hrom_integrate(h.m, q0.data(), n, 400, 0.05, 1, 1, &traj) == HROM_OK);
  CHECK(hrom_trajectory_samples(traj) == 401);
  CHECK(hrom_trajectory_dim(traj) == n);
  CHECK(hrom_trajectory_dt(traj) == doctest::Approx(0.05));

  hrom_basis* basis = nullptr;
  REQUIRE(hrom_basis_build(h.m, traj,
                           R"({"mode":"per_field","num_modes":10,"svd":{"method":"full"}})",
                           &basis) == HROM_OK);
  CHECK(hrom_basis_modes(basis) == 20);

  hrom_rom* rom = nullptr;
  REQUIRE(hrom_rom_build(h.m, basis, &rom) == HROM_OK);
  CHECK(hrom_rom_dim(rom) == 20);

  std::vector<double> qr0(20);
  REQUIRE(hrom_basis_project(basis, q0.data(), n, qr0.data(), 20) == HROM_OK);

  std::vector<double> ft(20), fl(20);
  REQUIRE(hrom_rom_rhs(rom, qr0.data(), 20, ft.data(), HROM_PATH_TENSORIAL) == HROM_OK);
  REQUIRE(hrom_rom_rhs(rom, qr0.data(), 20, fl.data(), HROM_PATH_LIFTED) == HROM_OK);
  for (int i = 0; i < 20; ++i) CHECK(ft[i] == doctest::Approx(fl[i]).epsilon(1e-11));

  hrom_trajectory* red = nullptr;
  REQUIRE(hrom_rom_integrate(rom, qr0.data(), 20, 100, 0.05, 1, HROM_PATH_TENSORIAL, &red) ==
          HROM_OK);
  CHECK(hrom_trajectory_samples(red) == 101);

  // lift the final reduced state and sanity-check the amplitude range
  std::vector<double> qrT(20), qT(n);
  REQUIRE(hrom_trajectory_state(red, 100, qrT.data(), 20) == HROM_OK);
  REQUIRE(hrom_basis_lift(basis, qrT.data(), 20, qT.data(), n) == HROM_OK);
  for (double v : qT) CHECK(std::abs(v) < 10.0);

  hrom_trajectory_free(red);
  hrom_rom_free(rom);
  hrom_basis_free(basis);
  hrom_trajectory_free(traj);
}

TEST_CASE("trajectory save and load round-trip through the C API") {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("hrom_capi_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  const std::string path = (dir / "traj.bin").string();

  ModelHandle h(kSingleModel);
  const int64_t n = hrom_model_dim(h.m);
  std::vector<double> q0(n);
  REQUIRE(hrom_model_initial_state(h.m, q0.data(), n) == HROM_OK);
  hrom_trajectory* traj = nullptr;
  REQUIRE(hrom_integrate(h.m, q0.data(), n, 20, 0.01, 1, 0, &traj) == HROM_OK);
  REQUIRE(hrom_trajectory_save(traj, path.c_str(), R"({"config_hash":"t"})") == HROM_OK);

  hrom_trajectory* loaded = nullptr;
  REQUIRE(hrom_trajectory_load(path.c_str(), &loaded) == HROM_OK);
  CHECK(hrom_trajectory_samples(loaded) == hrom_trajectory_samples(traj));
  std::vector<double> a(n), b(n);
  REQUIRE(hrom_trajectory_state(traj, 20, a.data(), n) == HROM_OK);
  REQUIRE(hrom_trajectory_state(loaded, 20, b.data(), n) == HROM_OK);
  CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * n) == 0);

  CHECK(hrom_trajectory_load((dir / "absent.bin").string().c_str(), &loaded) ==
        HROM_ERR_MISSING_INPUT);

  hrom_trajectory_free(loaded);
  hrom_trajectory_free(traj);
  fs::remove_all(dir);
}

TEST_CASE("hrom_run rejects unknown subcommands and missing configs") {
  CHECK(hrom_run("explode", "/nonexistent.json", nullptr) == HROM_ERR_MISSING_INPUT);
  CHECK(hrom_run(nullptr, "x", nullptr) == HROM_ERR_INVALID_ARG);
}
