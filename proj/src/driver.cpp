#include "driver.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "diagnostics.hpp"
#include "exact_solutions.hpp"
#include "snapshot_io.hpp"
#include "util.hpp"

namespace hrom {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(ErrorCode::io, "cannot open for writing: " + path);
  f << text;
}

void write_summary(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string csv_row(const std::vector<double>& vals) {
  std::string row;
  for (size_t i = 0; i < vals.size(); ++i) {
    if (i) row += ',';
    row += g17(vals[i]);
  }
  row += '\n';
  return row;
}

void write_invariants_csv(const std::string& path, const Trajectory& traj) {
  std::string text = "t";
  for (const auto& name : traj.invariant_names()) text += "," + name;
  text += '\n';
  for (std::int64_t k = 0; k < traj.samples(); ++k) {
    std::vector<double> row{traj.times()[static_cast<size_t>(k)]};
    for (Eigen::Index r = 0; r < traj.invariant_series().rows(); ++r)
      row.push_back(traj.invariant_series()(r, k));
    text += csv_row(row);
  }
  write_text(path, text);
}

json artifact_meta(const ExperimentConfig& c) {
  json j;
  j["config_hash"] = config_hash(c);
  j["model"] = c.model.canonical;
  j["seed"] = c.seed;
  return j;
}

std::string sidecar_hash(const json& sidecar, const std::string& what) {
  if (!sidecar.contains("config_hash"))
    fail(ErrorCode::config, what + ": artifact carries no config hash");
  return sidecar.at("config_hash").get<std::string>();
}

void check_hash(const ExperimentConfig& c, const json& sidecar, const std::string& what) {
  const std::string expect = config_hash(c);
  const std::string got = sidecar_hash(sidecar, what);
  if (got != expect)
    fail(ErrorCode::config, what + ": config hash mismatch (artifact " + got + ", config " +
                                expect + "); refusing to compare across configurations");
}

json invariant_drift(const Trajectory& traj) {
  json out;
  if (!traj.has_invariants()) return out;
  for (Eigen::Index r = 0; r < traj.invariant_series().rows(); ++r) {
    const auto row = traj.invariant_series().row(r);
    const double first = row(0);
    const double dev = (row.array() - first).abs().maxCoeff();
    out[traj.invariant_names()[static_cast<size_t>(r)]] = {{"initial", first},
                                                           {"max_abs_deviation", dev}};
  }
  return out;
}

}  // namespace

json run_fom(const ExperimentConfig& c) {
  fs::create_directories(c.out_dir);
  const SkewGradientModel model = make_model(c.model);
  const Eigen::VectorXd q0 = initial_condition(model, c.model.ic);
  const TimeMesh mesh = TimeMesh::with_steps(c.time.t_final, c.time.steps);

  IntegrateOptions opt;
  opt.sample_stride = c.snapshots.stride;
  opt.record_invariants = true;
  opt.record_modified_hamiltonian = true;
  const Trajectory traj = integrate(model, q0, mesh, opt);

  save_trajectory(c.out_dir + "/snapshots.bin", traj, artifact_meta(c));
  write_invariants_csv(c.out_dir + "/fom_invariants.csv", traj);

  json summary;
  summary["subcommand"] = "fom";
  summary["config_hash"] = config_hash(c);
  summary["dim"] = model.dim();
  summary["steps"] = mesh.steps;
  summary["dt"] = mesh.dt();
  summary["samples"] = traj.samples();
  summary["invariants"] = invariant_drift(traj);
  write_summary(c.out_dir + "/fom_summary.json", summary);
  return summary;
}

json run_basis(const ExperimentConfig& c) {
  const SkewGradientModel model = make_model(c.model);
  json side;
  const std::string snap_path = c.out_dir + "/snapshots.bin";
  const Trajectory traj = load_trajectory(snap_path, &side);
  check_hash(c, side, "basis: " + snap_path);
  if (traj.dim() != model.dim()) fail(ErrorCode::config, "basis: snapshot dimension mismatch");

  const Basis basis =
      build_basis(traj.snapshot_block(c.snapshots.include_initial), model.layout(), c.basis);

  json meta = artifact_meta(c);
  meta["svd"] = {{"oversample", c.basis.rsvd.oversample},
                 {"power_iterations", c.basis.rsvd.power_iterations},
                 {"seed", c.basis.rsvd.seed},
                 {"max_rank", c.basis.max_rank}};
  save_basis(c.out_dir + "/basis", basis, meta);

  std::string spectrum_csv = "field,k,sigma,ric\n";
  json blocks = json::array();
  for (const auto& b : basis.blocks()) {
    const Eigen::VectorXd curve = ric_curve(b.spectrum);
    for (Eigen::Index k = 0; k < b.spectrum.size(); ++k)
      spectrum_csv += b.field + "," + std::to_string(k + 1) + "," + g17(b.spectrum[k]) + "," +
                      g17(curve[k]) + "\n";
    blocks.push_back({{"field", b.field},
                      {"modes", static_cast<int>(b.modes.cols())},
                      {"spectrum_size", static_cast<int>(b.spectrum.size())}});
  }
  write_text(c.out_dir + "/spectrum.csv", spectrum_csv);

  json summary;
  summary["subcommand"] = "basis";
  summary["config_hash"] = config_hash(c);
  summary["total_modes"] = basis.total_modes();
  summary["blocks"] = blocks;
  summary["ric_threshold"] = c.basis.ric_threshold;
  summary["seed"] = c.seed;
  write_summary(c.out_dir + "/basis_summary.json", summary);
  return summary;
}

namespace {

json run_rom_one(const ExperimentConfig& c, const SkewGradientModel& model, const ReducedModel& rm,
                 const Eigen::VectorXd& qr0, const TimeMesh& mesh, RomPath path) {
  IntegrateOptions opt;
  opt.sample_stride = c.snapshots.stride;
  opt.record_invariants = true;
  opt.record_modified_hamiltonian = true;
  const Trajectory rtraj = integrate_reduced(rm, qr0, mesh, path, opt);
  const std::string tag = path == RomPath::tensorial ? "tensorial" : "lifted";
  json meta = artifact_meta(c);
  meta["rom_path"] = tag;
  meta["modes"] = rm.dim();
  save_trajectory(c.out_dir + "/rom_traj_" + tag + ".bin", rtraj, meta);
  write_invariants_csv(c.out_dir + "/rom_invariants_" + tag + ".csv", rtraj);
  json out;
  out["path"] = tag;
  out["samples"] = rtraj.samples();
  out["invariants"] = invariant_drift(rtraj);
  return out;
}

}  // namespace

json run_rom(const ExperimentConfig& c) {
  const SkewGradientModel model = make_model(c.model);
  json bside;
  const Basis basis = load_basis(c.out_dir + "/basis", &bside);
  check_hash(c, bside, "rom: basis");
  const ReducedModel rm = reduce(model, basis);

  // Reduced operators, dense binary containers plus a manifest.
  const std::string ops_dir = c.out_dir + "/rom_ops";
  fs::create_directories(ops_dir);
  json ops_manifest = artifact_meta(c);
  save_matrix(ops_dir + "/s_hat.bin", rm.skew(), 0.0, 1, {{"kind", "s_hat"}});
  save_matrix(ops_dir + "/l_hat.bin", rm.lin_grad(), 0.0, 1, {{"kind", "l_hat"}});
  json terms = json::array();
  for (size_t i = 0; i < rm.tensor_terms().size(); ++i) {
    const auto& t = rm.tensor_terms()[i];
    save_matrix(ops_dir + "/w_" + std::to_string(i) + ".bin", t.w, 0.0, 1,
                {{"kind", "reduced_tensor"}});
    terms.push_back({{"a_off", t.a_off},
                     {"a_n", t.a_n},
                     {"b_off", t.b_off},
                     {"b_n", t.b_n},
                     {"out_off", t.out_off},
                     {"out_n", t.out_n}});
  }
  ops_manifest["terms"] = terms;
  write_summary(ops_dir + "/rom.json", ops_manifest);

  const Eigen::VectorXd q0 = initial_condition(model, c.model.ic);
  const Eigen::VectorXd qr0 = basis.project(q0);
  const TimeMesh mesh = TimeMesh::with_steps(c.time.t_final, c.time.steps);

  json summary;
  summary["subcommand"] = "rom";
  summary["config_hash"] = config_hash(c);
  summary["modes"] = rm.dim();
  json runs = json::array();
  if (c.rom.path == "tensorial" || c.rom.path == "both")
    runs.push_back(run_rom_one(c, model, rm, qr0, mesh, RomPath::tensorial));
  if (c.rom.path == "lifted" || c.rom.path == "both")
    runs.push_back(run_rom_one(c, model, rm, qr0, mesh, RomPath::lifted));
  summary["runs"] = runs;

  if (c.rom.path == "both") {
    const Trajectory a = load_trajectory(c.out_dir + "/rom_traj_tensorial.bin");
    const Trajectory b = load_trajectory(c.out_dir + "/rom_traj_lifted.bin");
    summary["cross_path_max_abs_diff"] = (a.states() - b.states()).cwiseAbs().maxCoeff();
  }
  write_summary(c.out_dir + "/rom_summary.json", summary);
  return summary;
}

json run_compare(const ExperimentConfig& c) {
  const SkewGradientModel model = make_model(c.model);
  json fside, bside;
  const Trajectory fom = load_trajectory(c.out_dir + "/snapshots.bin", &fside);
  check_hash(c, fside, "compare: snapshots");
  const Basis basis = load_basis(c.out_dir + "/basis", &bside);
  check_hash(c, bside, "compare: basis");

  json summary;
  summary["subcommand"] = "compare";
  summary["config_hash"] = config_hash(c);
  json per_path = json::array();

  std::vector<std::string> tags;
  if (c.rom.path == "tensorial" || c.rom.path == "both") tags.push_back("tensorial");
  if (c.rom.path == "lifted" || c.rom.path == "both") tags.push_back("lifted");
  for (const auto& tag : tags) {
    json rside;
    const std::string rpath = c.out_dir + "/rom_traj_" + tag + ".bin";
    const Trajectory rom = load_trajectory(rpath, &rside);
    check_hash(c, rside, "compare: " + rpath);
    const ErrorReport rep = compare_trajectories(model, fom, rom, basis);

    std::string csv = "t,rel_l2";
    for (const auto& inv : rep.invariants) csv += ",abs_err_" + inv.name;
    csv += '\n';
    for (size_t k = 0; k < rep.times.size(); ++k) {
      std::vector<double> row{rep.times[k], rep.rel_l2[k]};
      for (const auto& inv : rep.invariants) row.push_back(inv.abs_err[k]);
      csv += csv_row(row);
    }
    write_text(c.out_dir + "/compare_series_" + tag + ".csv", csv);

    json jp;
    jp["path"] = tag;
    jp["rel_l2_mean"] = rep.rel_l2_mean;
    for (const auto& inv : rep.invariants) jp["abs_err_mean_" + inv.name] = inv.mean;
    per_path.push_back(jp);
  }
  summary["reports"] = per_path;
  write_summary(c.out_dir + "/compare_summary.json", summary);
  return summary;
}

json run_eoc(const ExperimentConfig& c) {
  if (!c.eoc) fail(ErrorCode::config, "eoc: config has no 'eoc' section");
  const auto* ic = std::get_if<TwoSolitonIc>(&c.model.ic);
  if (!ic || c.model.kind != ModelKind::single_kdv)
    fail(ErrorCode::config, "eoc: requires the single KdV model with a two_soliton initial condition");
  const auto& g0 = std::get<Grid1D>(c.model.grid);

  TwoSolitonParams ps;
  ps.k1 = ic->k1;
  ps.k2 = ic->k2;
  ps.phase1 = ic->phase1;
  ps.phase2 = ic->phase2;

  struct Level {
    double dx = 0, dt = 0, error = 0;
  };
  std::vector<Level> levels(static_cast<size_t>(c.eoc->levels));

  auto run_level = [&](int li) {
    const double dx = c.eoc->coarsest_dx / std::pow(2.0, li);
    const double dt = c.eoc->coarsest_dt / std::pow(2.0, li);
    const double len = g0.b - g0.a;
    const double n_raw = len / dx;
    const int n = static_cast<int>(std::llround(n_raw));
    if (std::abs(n_raw - n) > 1e-9 * n_raw)
      fail(ErrorCode::config, "eoc: dx does not divide the domain at level " + std::to_string(li));
    const Grid1D grid(n, g0.a, g0.b);
    const SkewGradientModel model =
        SkewGradientModel::assemble(ModelKind::single_kdv, ModelParams{c.model.alpha, c.model.mu}, grid);
    Eigen::VectorXd q0(n), exact_T(n);
    const TimeMesh mesh = TimeMesh::with_dt(c.time.t_final, dt);
    for (int i = 0; i < n; ++i) {
      q0[i] = exact_two_soliton(grid.node(i), 0.0, ps);
      exact_T[i] = exact_two_soliton(grid.node(i), c.time.t_final, ps);
    }
    IntegrateOptions opt;
    opt.sample_stride = mesh.steps;  // only the endpoint matters
    const Trajectory traj = integrate(model, q0, mesh, opt);
    levels[static_cast<size_t>(li)] = {
        grid.h, mesh.dt(),
        relative_l2_state(exact_T, traj.states().col(traj.samples() - 1), grid.h)};
  };

  // Independent integrations; fan out over the configured worker count.
  const int workers = std::max(1, c.threads);
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  auto work = [&] {
    for (int li = next.fetch_add(1); li < c.eoc->levels; li = next.fetch_add(1)) run_level(li);
  };
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::vector<std::pair<double, double>> pairs;
  for (const auto& lv : levels) pairs.emplace_back(lv.dx, lv.error);
  const std::vector<double> orders = eoc(pairs);

  fs::create_directories(c.out_dir);
  std::string csv = "dx,dt,error,order\n";
  for (size_t i = 0; i < levels.size(); ++i) {
    csv += g17(levels[i].dx) + "," + g17(levels[i].dt) + "," + g17(levels[i].error) + ",";
    csv += (i == 0 ? std::string("") : g17(orders[i - 1]));
    csv += '\n';
  }
  write_text(c.out_dir + "/eoc.csv", csv);

  json summary;
  summary["subcommand"] = "eoc";
  summary["config_hash"] = config_hash(c);
  json jl = json::array(), jo = json::array();
  for (const auto& lv : levels) jl.push_back({{"dx", lv.dx}, {"dt", lv.dt}, {"error", lv.error}});
  for (double o : orders) jo.push_back(o);
  summary["levels"] = jl;
  summary["orders"] = jo;
  write_summary(c.out_dir + "/eoc_summary.json", summary);
  return summary;
}

json run_bench(const ExperimentConfig& c) {
  if (!c.bench) fail(ErrorCode::config, "bench: config has no 'bench' section");
  fs::create_directories(c.out_dir);
  const auto& bc = *c.bench;

  auto bench_at = [&](const ModelConfig& mc) {
    const SkewGradientModel model = make_model(mc);
    const Eigen::VectorXd q0 = initial_condition(model, mc.ic);
    const double dt = c.time.t_final / static_cast<double>(c.time.steps);
    const TimeMesh mesh = TimeMesh::with_steps(dt * static_cast<double>(bc.steps), bc.steps);
    return benchmark_pipeline(model, q0, mesh, bc.num_modes, c.basis.rsvd, bc.repetitions);
  };

  auto report_json = [](const BenchReport& r) {
    json j;
    j["dim"] = r.dim;
    j["modes"] = r.modes;
    j["steps"] = r.steps;
    j["repetitions"] = r.repetitions;
    j["fom_seconds"] = r.fom_s;
    j["offline"] = {{"basis_seconds", r.basis_s},
                    {"reduce_linear_seconds", r.reduce_linear_s},
                    {"reduce_tensor_seconds", r.reduce_tensor_s},
                    {"pod_total_seconds", r.offline_pod_s()},
                    {"tpod_total_seconds", r.offline_tpod_s()}};
    j["online"] = {{"tensorial_seconds", r.online_tensorial_s},
                   {"lifted_seconds", r.online_lifted_s}};
    j["speedup"] = {{"tensorial", r.speedup_tensorial()}, {"lifted", r.speedup_lifted()}};
    return j;
  };

  json summary;
  summary["subcommand"] = "bench";
  summary["config_hash"] = config_hash(c);
  const BenchReport base = bench_at(c.model);
  summary["base"] = report_json(base);

  if (bc.scaled_dim_factor > 1) {
    ModelConfig scaled = c.model;
    auto* g1 = std::get_if<Grid1D>(&scaled.grid);
    if (!g1) fail(ErrorCode::config, "bench: scaled_dim_factor requires a 1D model");
    scaled.grid = Grid1D(g1->n * bc.scaled_dim_factor, g1->a, g1->b);
    const BenchReport big = bench_at(scaled);
    summary["scaled"] = report_json(big);
    summary["scaling"] = {
        {"dim_factor", bc.scaled_dim_factor},
        {"online_tensorial_ratio", big.online_tensorial_s / base.online_tensorial_s},
        {"online_lifted_ratio", big.online_lifted_s / base.online_lifted_s}};
  }
  write_summary(c.out_dir + "/bench.json", summary);
  return summary;
}

json run_subcommand(const std::string& subcommand, const std::string& config_path,
                    const RunOverrides& overrides) {
  ExperimentConfig c = load_config_file(config_path);
  if (overrides.seed) {
    c.seed = *overrides.seed;
    c.basis.rsvd.seed = *overrides.seed;
  }
  if (overrides.out_dir) c.out_dir = *overrides.out_dir;
  if (overrides.threads) c.threads = std::max(1, *overrides.threads);
  if (overrides.rom_path) {
    if (*overrides.rom_path != "tensorial" && *overrides.rom_path != "lifted" &&
        *overrides.rom_path != "both")
      fail(ErrorCode::config, "rom path override: expected 'tensorial', 'lifted' or 'both'");
    c.rom.path = *overrides.rom_path;
  }
  if (const char* env_out = std::getenv("HROM_OUT"); env_out && *env_out) c.out_dir = env_out;

  if (subcommand == "fom") return run_fom(c);
  if (subcommand == "basis") return run_basis(c);
  if (subcommand == "rom") return run_rom(c);
  if (subcommand == "compare") return run_compare(c);
  if (subcommand == "eoc") return run_eoc(c);
  if (subcommand == "bench") return run_bench(c);
  fail(ErrorCode::config, "unknown subcommand '" + subcommand + "'");
}

}  // namespace hrom
