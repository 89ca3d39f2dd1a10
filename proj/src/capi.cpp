#include "hrom.h"

#include <cstring>
#include <json.hpp>
#include <string>

#include "config.hpp"
#include "driver.hpp"
#include "rom.hpp"
#include "snapshot_io.hpp"

struct hrom_model {
  hrom::SkewGradientModel model;
  hrom::IcSpec ic;
};

struct hrom_trajectory {
  hrom::Trajectory traj;
};

struct hrom_basis {
  hrom::Basis basis;
};

struct hrom_rom {
  hrom::ReducedModel rm;
};

namespace {

thread_local std::string g_last_error;

hrom_status status_of(hrom::ErrorCode c) {
  switch (c) {
    case hrom::ErrorCode::config: return HROM_ERR_CONFIG;
    case hrom::ErrorCode::numeric: return HROM_ERR_NUMERIC;
    case hrom::ErrorCode::missing_input: return HROM_ERR_MISSING_INPUT;
    case hrom::ErrorCode::invalid_argument: return HROM_ERR_INVALID_ARG;
    case hrom::ErrorCode::io: return HROM_ERR_IO;
    case hrom::ErrorCode::internal: return HROM_ERROR;
  }
  return HROM_ERROR;
}

template <typename F>
hrom_status guarded(F&& body) noexcept {
  try {
    g_last_error.clear();
    body();
    return HROM_OK;
  } catch (const hrom::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HROM_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return HROM_ERROR;
  }
}

void require_ptr(const void* p, const char* what) {
  if (!p) hrom::fail(hrom::ErrorCode::invalid_argument, std::string(what) + " is null");
}

nlohmann::json parse_json_arg(const char* text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    hrom::fail(hrom::ErrorCode::config, std::string(what) + ": " + e.what());
  }
}

}  // namespace

extern "C" {

const char* hrom_status_name(hrom_status s) {
  switch (s) {
    case HROM_OK: return "ok";
    case HROM_ERROR: return "internal error";
    case HROM_ERR_CONFIG: return "configuration error";
    case HROM_ERR_NUMERIC: return "numerical failure";
    case HROM_ERR_MISSING_INPUT: return "missing input";
    case HROM_ERR_INVALID_ARG: return "invalid argument";
    case HROM_ERR_IO: return "i/o error";
  }
  return "?";
}

const char* hrom_last_error(void) { return g_last_error.c_str(); }

hrom_status hrom_model_create(const char* model_json, hrom_model** out) {
  return guarded([&] {
    require_ptr(model_json, "model_json");
    require_ptr(out, "out");
    const hrom::ModelConfig mc =
        hrom::parse_model_config(parse_json_arg(model_json, "model_json"), "model");
    *out = new hrom_model{hrom::make_model(mc), mc.ic};
  });
}

void hrom_model_free(hrom_model* m) { delete m; }

int64_t hrom_model_dim(const hrom_model* m) { return m ? m->model.dim() : -1; }

hrom_status hrom_model_initial_state(const hrom_model* m, double* q, int64_t len) {
  return guarded([&] {
    require_ptr(m, "model");
    require_ptr(q, "q");
    if (len != m->model.dim())
      hrom::fail(hrom::ErrorCode::invalid_argument, "initial_state: buffer length mismatch");
    const Eigen::VectorXd q0 = hrom::initial_condition(m->model, m->ic);
    std::memcpy(q, q0.data(), sizeof(double) * static_cast<size_t>(len));
  });
}

hrom_status hrom_model_rhs(const hrom_model* m, const double* q, int64_t len, double* out) {
  return guarded([&] {
    require_ptr(m, "model");
    require_ptr(q, "q");
    require_ptr(out, "out");
    if (len != m->model.dim())
      hrom::fail(hrom::ErrorCode::invalid_argument, "rhs: dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> qv(q, len);
    Eigen::VectorXd f(len);
    m->model.rhs(qv, f);
    std::memcpy(out, f.data(), sizeof(double) * static_cast<size_t>(len));
  });
}

hrom_status hrom_model_invariants(const hrom_model* m, const double* q, int64_t len, double* values,
                                  int64_t cap, int64_t* count) {
  return guarded([&] {
    require_ptr(m, "model");
    require_ptr(q, "q");
    require_ptr(values, "values");
    require_ptr(count, "count");
    if (len != m->model.dim())
      hrom::fail(hrom::ErrorCode::invalid_argument, "invariants: dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> qv(q, len);
    const auto vals = m->model.invariants(qv).values();
    if (cap < static_cast<int64_t>(vals.size()))
      hrom::fail(hrom::ErrorCode::invalid_argument, "invariants: buffer too small");
    for (size_t i = 0; i < vals.size(); ++i) values[i] = vals[i];
    *count = static_cast<int64_t>(vals.size());
  });
}

hrom_status hrom_integrate(const hrom_model* m, const double* q0, int64_t len, int64_t steps,
                           double dt, int64_t sample_stride, int record_invariants,
                           hrom_trajectory** out) {
  return guarded([&] {
    require_ptr(m, "model");
    require_ptr(q0, "q0");
    require_ptr(out, "out");
    if (len != m->model.dim())
      hrom::fail(hrom::ErrorCode::invalid_argument, "integrate: dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> q0v(q0, len);
    const hrom::TimeMesh mesh =
        hrom::TimeMesh::with_steps(dt * static_cast<double>(steps), steps);
    hrom::IntegrateOptions opt;
    opt.sample_stride = sample_stride;
    opt.record_invariants = record_invariants != 0;
    opt.record_modified_hamiltonian = record_invariants != 0;
    *out = new hrom_trajectory{hrom::integrate(m->model, q0v, mesh, opt)};
  });
}

void hrom_trajectory_free(hrom_trajectory* t) { delete t; }

int64_t hrom_trajectory_dim(const hrom_trajectory* t) { return t ? t->traj.dim() : -1; }

int64_t hrom_trajectory_samples(const hrom_trajectory* t) { return t ? t->traj.samples() : -1; }

double hrom_trajectory_dt(const hrom_trajectory* t) { return t ? t->traj.dt() : 0.0; }

hrom_status hrom_trajectory_state(const hrom_trajectory* t, int64_t k, double* out, int64_t len) {
  return guarded([&] {
    require_ptr(t, "trajectory");
    require_ptr(out, "out");
    if (k < 0 || k >= t->traj.samples())
      hrom::fail(hrom::ErrorCode::invalid_argument, "trajectory_state: sample index out of range");
    if (len != t->traj.dim())
      hrom::fail(hrom::ErrorCode::invalid_argument, "trajectory_state: buffer length mismatch");
    Eigen::Map<Eigen::VectorXd>(out, len) = t->traj.states().col(k);
  });
}

hrom_status hrom_trajectory_save(const hrom_trajectory* t, const char* path,
                                 const char* meta_json) {
  return guarded([&] {
    require_ptr(t, "trajectory");
    require_ptr(path, "path");
    nlohmann::json meta;
    if (meta_json) meta = parse_json_arg(meta_json, "meta_json");
    hrom::save_trajectory(path, t->traj, meta);
  });
}

hrom_status hrom_trajectory_load(const char* path, hrom_trajectory** out) {
  return guarded([&] {
    require_ptr(path, "path");
    require_ptr(out, "out");
    *out = new hrom_trajectory{hrom::load_trajectory(path)};
  });
}

hrom_status hrom_basis_build(const hrom_model* m, const hrom_trajectory* snapshots,
                             const char* options_json, hrom_basis** out) {
  return guarded([&] {
    require_ptr(m, "model");
    require_ptr(snapshots, "snapshots");
    require_ptr(out, "out");
    hrom::BasisOptions opt;
    bool include_initial = false;
    if (options_json) {
      const nlohmann::json j = parse_json_arg(options_json, "options_json");
      opt = hrom::parse_basis_options(j, "options");
      if (j.contains("include_initial")) include_initial = j.at("include_initial").get<bool>();
    }
    *out = new hrom_basis{hrom::build_basis(snapshots->traj.snapshot_block(include_initial),
                                            m->model.layout(), opt)};
  });
}

void hrom_basis_free(hrom_basis* b) { delete b; }

int64_t hrom_basis_modes(const hrom_basis* b) { return b ? b->basis.total_modes() : -1; }

hrom_status hrom_basis_lift(const hrom_basis* b, const double* qr, int64_t n, double* q,
                            int64_t len) {
  return guarded([&] {
    require_ptr(b, "basis");
    require_ptr(qr, "qr");
    require_ptr(q, "q");
    if (n != b->basis.total_modes() || len != b->basis.full_dim())
      hrom::fail(hrom::ErrorCode::invalid_argument, "lift: dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> qrv(qr, n);
    Eigen::Map<Eigen::VectorXd>(q, len) = b->basis.lift(qrv);
  });
}

hrom_status hrom_basis_project(const hrom_basis* b, const double* q, int64_t len, double* qr,
                               int64_t n) {
  return guarded([&] {
    require_ptr(b, "basis");
    require_ptr(q, "q");
    require_ptr(qr, "qr");
    if (n != b->basis.total_modes() || len != b->basis.full_dim())
      hrom::fail(hrom::ErrorCode::invalid_argument, "project: dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> qv(q, len);
    Eigen::Map<Eigen::VectorXd>(qr, n) = b->basis.project(qv);
  });
}

hrom_status hrom_rom_build(const hrom_model* m, const hrom_basis* b, hrom_rom** out) {
  return guarded([&] {
    require_ptr(m, "model");
    require_ptr(b, "basis");
    require_ptr(out, "out");
    *out = new hrom_rom{hrom::reduce(m->model, b->basis)};
  });
}

void hrom_rom_free(hrom_rom* r) { delete r; }

int64_t hrom_rom_dim(const hrom_rom* r) { return r ? r->rm.dim() : -1; }

hrom_status hrom_rom_rhs(const hrom_rom* r, const double* qr, int64_t n, double* out, int path) {
  return guarded([&] {
    require_ptr(r, "rom");
    require_ptr(qr, "qr");
    require_ptr(out, "out");
    if (n != r->rm.dim()) hrom::fail(hrom::ErrorCode::invalid_argument, "rom_rhs: dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> qrv(qr, n);
    Eigen::VectorXd f(n);
    if (path == HROM_PATH_TENSORIAL)
      r->rm.rhs_tensorial(qrv, f);
    else if (path == HROM_PATH_LIFTED)
      r->rm.rhs_lifted(qrv, f);
    else
      hrom::fail(hrom::ErrorCode::invalid_argument, "rom_rhs: unknown path");
    std::memcpy(out, f.data(), sizeof(double) * static_cast<size_t>(n));
  });
}

hrom_status hrom_rom_integrate(const hrom_rom* r, const double* qr0, int64_t n, int64_t steps,
                               double dt, int64_t sample_stride, int path, hrom_trajectory** out) {
  return guarded([&] {
    require_ptr(r, "rom");
    require_ptr(qr0, "qr0");
    require_ptr(out, "out");
    if (n != r->rm.dim())
      hrom::fail(hrom::ErrorCode::invalid_argument, "rom_integrate: dimension mismatch");
    if (path != HROM_PATH_TENSORIAL && path != HROM_PATH_LIFTED)
      hrom::fail(hrom::ErrorCode::invalid_argument, "rom_integrate: unknown path");
    Eigen::Map<const Eigen::VectorXd> qr0v(qr0, n);
    const hrom::TimeMesh mesh =
        hrom::TimeMesh::with_steps(dt * static_cast<double>(steps), steps);
    hrom::IntegrateOptions opt;
    opt.sample_stride = sample_stride;
    *out = new hrom_trajectory{hrom::integrate_reduced(
        r->rm, qr0v, mesh, path == HROM_PATH_TENSORIAL ? hrom::RomPath::tensorial : hrom::RomPath::lifted,
        opt)};
  });
}

hrom_status hrom_run(const char* subcommand, const char* config_path, const char* overrides_json) {
  return guarded([&] {
    require_ptr(subcommand, "subcommand");
    require_ptr(config_path, "config_path");
    hrom::RunOverrides ov;
    if (overrides_json) {
      const nlohmann::json j = parse_json_arg(overrides_json, "overrides_json");
      if (j.contains("seed")) ov.seed = j.at("seed").get<std::uint64_t>();
      if (j.contains("out")) ov.out_dir = j.at("out").get<std::string>();
      if (j.contains("threads")) ov.threads = j.at("threads").get<int>();
      if (j.contains("path")) ov.rom_path = j.at("path").get<std::string>();
    }
    hrom::run_subcommand(subcommand, config_path, ov);
  });
}

}  // extern "C"
