#include "snapshot_io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

namespace hrom {

namespace {

constexpr char kMagic[8] = {'H', 'R', 'O', 'M', 'S', 'N', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

// Payload doubles are written in the host's native layout; this toolkit
// targets little-endian IEEE-754 hosts.
static_assert(sizeof(double) == 8);

void write_u32(std::ofstream& f, std::uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); }
void write_u64(std::ofstream& f, std::uint64_t v) { f.write(reinterpret_cast<const char*>(&v), 8); }
void write_f64(std::ofstream& f, double v) { f.write(reinterpret_cast<const char*>(&v), 8); }

template <typename T>
T read_pod(std::ifstream& f, const std::string& path) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) fail(ErrorCode::io, "truncated matrix file: " + path);
  return v;
}

}  // namespace

void save_matrix(const std::string& path, const Eigen::Ref<const Eigen::MatrixXd>& m, double dt,
                 std::uint64_t stride, const nlohmann::json& sidecar) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::io, "cannot open for writing: " + path);
  f.write(kMagic, sizeof(kMagic));
  write_u32(f, kVersion);
  write_u64(f, static_cast<std::uint64_t>(m.rows()));
  write_u64(f, static_cast<std::uint64_t>(m.cols()));
  write_f64(f, dt);
  write_u64(f, stride);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const Eigen::VectorXd col = m.col(c);
    f.write(reinterpret_cast<const char*>(col.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(col.size())));
  }
  if (!f) fail(ErrorCode::io, "write failed: " + path);
  f.close();

  std::ofstream side(path + ".json", std::ios::trunc);
  if (!side) fail(ErrorCode::io, "cannot open for writing: " + path + ".json");
  side << sidecar.dump(2) << "\n";
}

MatrixFile load_matrix(const std::string& path) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::missing_input, "missing input file: " + path);
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::io, "cannot open: " + path);

  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kMagic, 8) != 0)
    fail(ErrorCode::io, "not a matrix container (bad magic): " + path);
  const auto version = read_pod<std::uint32_t>(f, path);
  if (version != kVersion) fail(ErrorCode::io, "unsupported container version in " + path);
  const auto rows = read_pod<std::uint64_t>(f, path);
  const auto cols = read_pod<std::uint64_t>(f, path);
  MatrixFile out;
  out.dt = read_pod<double>(f, path);
  out.stride = read_pod<std::uint64_t>(f, path);
  if (rows == 0 || cols == 0 || rows > (1ull << 32) || cols > (1ull << 32))
    fail(ErrorCode::io, "implausible matrix dimensions in " + path);
  out.data.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  f.read(reinterpret_cast<char*>(out.data.data()),
         static_cast<std::streamsize>(sizeof(double) * rows * cols));
  if (!f) fail(ErrorCode::io, "truncated matrix payload: " + path);

  const std::string side_path = path + ".json";
  if (std::filesystem::exists(side_path)) {
    std::ifstream side(side_path);
    try {
      side >> out.sidecar;
    } catch (const std::exception& e) {
      fail(ErrorCode::io, "bad sidecar " + side_path + ": " + e.what());
    }
  }
  return out;
}

void save_trajectory(const std::string& path, const Trajectory& traj, const nlohmann::json& meta) {
  nlohmann::json side = meta;
  side["kind"] = "trajectory";
  side["dim"] = traj.dim();
  side["samples"] = traj.samples();
  side["dt"] = traj.dt();
  side["stride"] = traj.stride();
  save_matrix(path, traj.states(), traj.dt(), static_cast<std::uint64_t>(traj.stride()), side);
}

Trajectory load_trajectory(const std::string& path, nlohmann::json* sidecar_out) {
  MatrixFile mf = load_matrix(path);
  Trajectory traj(static_cast<int>(mf.data.rows()), mf.data.cols(), mf.dt,
                  static_cast<std::int64_t>(mf.stride));
  traj.states() = mf.data;
  for (Eigen::Index k = 0; k < mf.data.cols(); ++k)
    traj.set_time(k, static_cast<double>(k) * static_cast<double>(mf.stride) * mf.dt);
  if (sidecar_out) *sidecar_out = mf.sidecar;
  return traj;
}

void save_basis(const std::string& dir, const Basis& basis, const nlohmann::json& meta) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest = meta;
  manifest["kind"] = "basis";
  manifest["full_dim"] = basis.full_dim();
  manifest["total_modes"] = basis.total_modes();
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : basis.blocks()) {
    nlohmann::json jb;
    jb["field"] = b.field;
    jb["full_offset"] = b.full_offset;
    jb["modes"] = static_cast<int>(b.modes.cols());
    jb["rows"] = static_cast<int>(b.modes.rows());
    blocks.push_back(jb);
    save_matrix(dir + "/basis_" + b.field + ".bin", b.modes, 0.0, 1, {{"kind", "basis_block"}});
    save_matrix(dir + "/spectrum_" + b.field + ".bin", b.spectrum, 0.0, 1,
                {{"kind", "spectrum"}});
  }
  manifest["blocks"] = blocks;
  std::ofstream f(dir + "/basis.json", std::ios::trunc);
  if (!f) fail(ErrorCode::io, "cannot open for writing: " + dir + "/basis.json");
  f << manifest.dump(2) << "\n";
}

Basis load_basis(const std::string& dir, nlohmann::json* manifest_out) {
  const std::string mpath = dir + "/basis.json";
  if (!std::filesystem::exists(mpath)) fail(ErrorCode::missing_input, "missing basis manifest: " + mpath);
  nlohmann::json manifest;
  {
    std::ifstream f(mpath);
    try {
      f >> manifest;
    } catch (const std::exception& e) {
      fail(ErrorCode::io, std::string("bad basis manifest: ") + e.what());
    }
  }
  std::vector<Basis::Block> blocks;
  for (const auto& jb : manifest.at("blocks")) {
    Basis::Block b;
    b.field = jb.at("field").get<std::string>();
    b.full_offset = jb.at("full_offset").get<int>();
    b.modes = load_matrix(dir + "/basis_" + b.field + ".bin").data;
    b.spectrum = load_matrix(dir + "/spectrum_" + b.field + ".bin").data.col(0);
    blocks.push_back(std::move(b));
  }
  Basis basis(std::move(blocks), manifest.at("full_dim").get<int>());
  if (manifest_out) *manifest_out = manifest;
  return basis;
}

}  // namespace hrom
