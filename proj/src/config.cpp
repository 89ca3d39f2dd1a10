#include "config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "integrator.hpp"
#include "util.hpp"

namespace hrom {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorCode::config, path + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) bad(path + "." + key, "required field is missing");
  return *it;
}

double num(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

double num_at(const json& j, const char* key, const std::string& path) {
  return num(require(j, key, path), path + "." + key);
}

double num_or(const json& j, const char* key, const std::string& path, double dflt) {
  auto it = j.find(key);
  return it == j.end() ? dflt : num(*it, path + "." + key);
}

std::int64_t int_at(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_integer()) bad(path + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

std::int64_t int_or(const json& j, const char* key, const std::string& path, std::int64_t dflt) {
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_number_integer()) bad(path + "." + key, "expected an integer");
  return it->get<std::int64_t>();
}

std::string str_at(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string()) bad(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::string str_or(const json& j, const char* key, const std::string& path, const std::string& dflt) {
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_string()) bad(path + "." + key, "expected a string");
  return it->get<std::string>();
}

bool bool_or(const json& j, const char* key, const std::string& path, bool dflt) {
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_boolean()) bad(path + "." + key, "expected a boolean");
  return it->get<bool>();
}

IcSpec parse_ic(const json& j, const std::string& path, ModelKind kind) {
  const std::string ic_kind = str_at(j, "kind", path);
  if (ic_kind == "one_soliton") {
    OneSolitonIc ic;
    ic.beta = num_at(j, "beta", path);
    if (!(ic.beta > 0.0)) bad(path + ".beta", "must be positive");
    return ic;
  }
  if (ic_kind == "two_soliton") {
    TwoSolitonIc ic;
    ic.k1 = num_or(j, "k1", path, ic.k1);
    ic.k2 = num_or(j, "k2", path, ic.k2);
    ic.phase1 = num_or(j, "phase1", path, ic.phase1);
    ic.phase2 = num_or(j, "phase2", path, ic.phase2);
    if (ic.k1 + ic.k2 == 0.0) bad(path, "two_soliton: k1 = -k2 is degenerate");
    return ic;
  }
  if (ic_kind == "gaussian") {
    GaussianIc ic;
    ic.amplitude = num_or(j, "amplitude", path, ic.amplitude);
    ic.center = num_or(j, "center", path, ic.center);
    ic.width = num_or(j, "width", path, ic.width);
    if (!(ic.width > 0.0)) bad(path + ".width", "must be positive");
    return ic;
  }
  if (ic_kind == "zk_two_pulse") {
    ZkTwoPulseIc ic;
    if (kind != ModelKind::zakharov_kuznetsov)
      bad(path, "zk_two_pulse requires the zakharov_kuznetsov model");
    auto a2m_it = j.find("a2m");
    if (a2m_it == j.end() || !a2m_it->is_array() || a2m_it->empty())
      bad(path + ".a2m",
          "the a2m coefficient list is a required input (externally tabulated); none provided");
    for (const auto& v : *a2m_it) ic.a2m.push_back(num(v, path + ".a2m[]"));
    const json& pulses = require(j, "pulses", path);
    if (!pulses.is_array() || pulses.empty()) bad(path + ".pulses", "expected a non-empty array");
    for (const auto& p : pulses) {
      ZkTwoPulseIc::Pulse pulse;
      pulse.c = num_at(p, "c", path + ".pulses[]");
      pulse.x = num_at(p, "x", path + ".pulses[]");
      pulse.y = num_at(p, "y", path + ".pulses[]");
      ic.pulses.push_back(pulse);
    }
    return ic;
  }
  bad(path + ".kind", "unknown initial condition kind '" + ic_kind + "'");
}

ModelConfig parse_model(const json& j, const std::string& path) {
  ModelConfig mc;
  mc.kind = model_kind_from_string(str_at(j, "kind", path));
  mc.alpha = num_or(j, "alpha", path, mc.kind == ModelKind::coupled_kdv ? 0.0 : 6.0);
  mc.mu = num_or(j, "mu", path, mc.kind == ModelKind::coupled_kdv ? 0.0 : 1.0);

  const json& jg = require(j, "grid", path);
  const std::string gpath = path + ".grid";
  if (mc.kind == ModelKind::zakharov_kuznetsov) {
    const auto nx = int_at(jg, "nx", gpath), ny = int_at(jg, "ny", gpath);
    if (nx < 3 || ny < 3) bad(gpath, "expected integer node counts >= 3");
    mc.grid = Grid2D(static_cast<int>(nx), static_cast<int>(ny), num_at(jg, "a", gpath),
                     num_at(jg, "b", gpath), num_at(jg, "c", gpath), num_at(jg, "d", gpath));
  } else {
    const auto n = int_at(jg, "n", gpath);
    if (n < 3) bad(gpath + ".n", "expected integer >= 3");
    mc.grid = Grid1D(static_cast<int>(n), num_at(jg, "a", gpath), num_at(jg, "b", gpath));
  }

  mc.ic = parse_ic(require(j, "initial_condition", path), path + ".initial_condition", mc.kind);

  // Normalized echo (defaults folded in) for hashing and artifact sidecars.
  json canon;
  canon["kind"] = to_string(mc.kind);
  canon["alpha"] = mc.alpha;
  canon["mu"] = mc.mu;
  if (const auto* g1 = std::get_if<Grid1D>(&mc.grid))
    canon["grid"] = {{"a", g1->a}, {"b", g1->b}, {"n", g1->n}};
  else {
    const auto& g2 = std::get<Grid2D>(mc.grid);
    canon["grid"] = {{"a", g2.a}, {"b", g2.b}, {"c", g2.c}, {"d", g2.d}, {"nx", g2.nx}, {"ny", g2.ny}};
  }
  canon["initial_condition"] = ic_to_json(mc.ic);
  mc.canonical = canon;
  return mc;
}

}  // namespace

nlohmann::json ic_to_json(const IcSpec& ic) {
  json out;
  std::visit(
      [&](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, OneSolitonIc>) {
          out = {{"kind", "one_soliton"}, {"beta", spec.beta}};
        } else if constexpr (std::is_same_v<T, TwoSolitonIc>) {
          out = {{"kind", "two_soliton"},
                 {"k1", spec.k1},
                 {"k2", spec.k2},
                 {"phase1", spec.phase1},
                 {"phase2", spec.phase2}};
        } else if constexpr (std::is_same_v<T, GaussianIc>) {
          out = {{"kind", "gaussian"},
                 {"amplitude", spec.amplitude},
                 {"center", spec.center},
                 {"width", spec.width}};
        } else {
          json pulses = json::array();
          for (const auto& p : spec.pulses) pulses.push_back({{"c", p.c}, {"x", p.x}, {"y", p.y}});
          out = {{"kind", "zk_two_pulse"}, {"pulses", pulses}, {"a2m", spec.a2m}};
        }
      },
      ic);
  return out;
}

ModelConfig parse_model_config(const nlohmann::json& j, const std::string& path) {
  return parse_model(j, path);
}

BasisOptions parse_basis_options(const nlohmann::json& j, const std::string& path) {
  BasisOptions b;
  const std::string mode = str_or(j, "mode", path, "per_field");
  if (mode == "monolithic")
    b.mode = BasisMode::monolithic;
  else if (mode == "per_field")
    b.mode = BasisMode::per_field;
  else
    bad(path + ".mode", "expected 'monolithic' or 'per_field'");
  if (j.contains("num_modes")) {
    const auto n = int_at(j, "num_modes", path);
    if (n < 1) bad(path + ".num_modes", "must be >= 1");
    b.num_modes = static_cast<int>(n);
  }
  b.ric_threshold = num_or(j, "ric_threshold", path, 99.99);
  if (auto sv = j.find("svd"); sv != j.end()) {
    const std::string spath = path + ".svd";
    const std::string method = str_or(*sv, "method", spath, "auto");
    if (method == "auto")
      b.method = SvdMethod::automatic;
    else if (method == "full")
      b.method = SvdMethod::full;
    else if (method == "randomized")
      b.method = SvdMethod::randomized;
    else
      bad(spath + ".method", "expected 'auto', 'full' or 'randomized'");
    b.rsvd.oversample = static_cast<int>(int_or(*sv, "oversample", spath, 10));
    b.rsvd.power_iterations = static_cast<int>(int_or(*sv, "power_iterations", spath, 2));
    b.max_rank = static_cast<int>(int_or(*sv, "max_rank", spath, 150));
    b.full_cutoff = static_cast<int>(int_or(*sv, "full_cutoff", spath, 1200));
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer()) bad(path + ".seed", "expected an integer");
    b.rsvd.seed = j.at("seed").get<std::uint64_t>();
  }
  return b;
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig c;
  c.model = parse_model(require(j, "model", "config"), "model");

  const json& jt = require(j, "time", "config");
  const double t_final = num_at(jt, "t_final", "time");
  if (!(t_final > 0.0)) bad("time.t_final", "must be positive");
  TimeMesh mesh{};
  if (jt.contains("steps"))
    mesh = TimeMesh::with_steps(t_final, int_at(jt, "steps", "time"));
  else if (jt.contains("dt"))
    mesh = TimeMesh::with_dt(t_final, num_at(jt, "dt", "time"));
  else
    bad("time", "either dt or steps is required");
  c.time = {mesh.t_final, mesh.steps};

  if (auto it = j.find("snapshots"); it != j.end()) {
    c.snapshots.stride = int_or(*it, "stride", "snapshots", 1);
    if (c.snapshots.stride < 1) bad("snapshots.stride", "must be >= 1");
    if (c.time.steps % c.snapshots.stride != 0)
      bad("snapshots.stride", "must divide the step count");
    c.snapshots.include_initial = bool_or(*it, "include_initial", "snapshots", false);
  }

  if (auto it = j.find("basis"); it != j.end()) c.basis = parse_basis_options(*it, "basis");

  if (auto it = j.find("rom"); it != j.end()) {
    c.rom.path = str_or(*it, "path", "rom", "tensorial");
    if (c.rom.path != "tensorial" && c.rom.path != "lifted" && c.rom.path != "both")
      bad("rom.path", "expected 'tensorial', 'lifted' or 'both'");
  }

  if (auto it = j.find("eoc"); it != j.end()) {
    EocConfig e;
    e.levels = static_cast<int>(int_or(*it, "levels", "eoc", 6));
    if (e.levels < 2) bad("eoc.levels", "need at least two levels");
    e.coarsest_dx = num_or(*it, "coarsest_dx", "eoc", 4.0);
    e.coarsest_dt = num_or(*it, "coarsest_dt", "eoc", 0.5);
    if (!(e.coarsest_dx > 0.0) || !(e.coarsest_dt > 0.0)) bad("eoc", "mesh sizes must be positive");
    c.eoc = e;
  }

  if (auto it = j.find("bench"); it != j.end()) {
    BenchConfig b;
    b.repetitions = static_cast<int>(int_or(*it, "repetitions", "bench", 3));
    if (b.repetitions < 1) bad("bench.repetitions", "must be >= 1");
    b.num_modes = static_cast<int>(int_or(*it, "num_modes", "bench", 30));
    b.steps = int_or(*it, "steps", "bench", 1000);
    b.scaled_dim_factor = static_cast<int>(int_or(*it, "scaled_dim_factor", "bench", 2));
    c.bench = b;
  }

  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_integer()) bad("seed", "expected an integer");
    c.seed = it->get<std::uint64_t>();
  }
  c.basis.rsvd.seed = c.seed;
  c.out_dir = str_or(j, "output_dir", "config", "out");
  c.threads = static_cast<int>(int_or(j, "threads", "config", 1));
  if (c.threads < 1) bad("threads", "must be >= 1");
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::missing_input, "missing config file: " + path);
  std::ifstream f(path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    fail(ErrorCode::config, "config parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

SkewGradientModel make_model(const ModelConfig& mc) {
  return SkewGradientModel::assemble(mc.kind, ModelParams{mc.alpha, mc.mu}, mc.grid);
}

std::string config_hash(const ExperimentConfig& c) {
  nlohmann::json j;
  j["model"] = c.model.canonical;
  j["time"] = {{"t_final", c.time.t_final}, {"steps", c.time.steps}};
  j["snapshots"] = {{"stride", c.snapshots.stride}, {"include_initial", c.snapshots.include_initial}};
  return hex64(fnv1a64(j.dump()));
}

}  // namespace hrom
