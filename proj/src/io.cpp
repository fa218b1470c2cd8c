// SPDX-License-Identifier: Apache-2.0
#include "voxsil/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

namespace voxsil {

namespace {

static_assert(std::numeric_limits<float>::is_iec559, "IEEE float32 required");

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, mode | std::ios::out | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void put_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

}  // namespace

void write_voxels(const std::filesystem::path& path, const VoxelGrid& grid) {
  std::vector<unsigned char> buf(std::begin(kVoxMagic), std::end(kVoxMagic));
  const GridDims& dims = grid.dims();
  put_u32(buf, static_cast<std::uint32_t>(dims.h));
  put_u32(buf, static_cast<std::uint32_t>(dims.w));
  put_u32(buf, static_cast<std::uint32_t>(dims.d));
  buf.reserve(buf.size() + 4 * grid.size());
  for (double v : grid.values()) put_u32(buf, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  auto out = open_out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  finish(out, path);
}

VoxelGrid read_voxels(const std::filesystem::path& path) {
  const auto buf = read_all(path);
  const std::string where = "'" + path.string() + "'";
  if (buf.size() < 20) throw FormatError(where + ": truncated .vox32 header");
  if (std::memcmp(buf.data(), kVoxMagic, 8) != 0) throw FormatError(where + ": bad .vox32 magic");
  const std::uint32_t h = get_u32(&buf[8]), w = get_u32(&buf[12]), d = get_u32(&buf[16]);
  constexpr std::uint32_t kMaxExtent = 1u << 12;
  if (h == 0 || w == 0 || d == 0 || h > kMaxExtent || w > kMaxExtent || d > kMaxExtent) {
    throw FormatError(where + ": invalid .vox32 dims");
  }
  const GridDims dims{int(h), int(w), int(d)};
  if (buf.size() != 20 + 4 * dims.count()) {
    throw FormatError(where + ": .vox32 payload size does not match dims");
  }
  std::vector<double> values(dims.count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::bit_cast<float>(get_u32(&buf[20 + 4 * i]));
  }
  try {
    return VoxelGrid(dims, std::move(values));
  } catch (const std::invalid_argument& e) {
    throw FormatError(where + ": " + e.what());
  }
}

void write_silhouette(const std::filesystem::path& path, const SilhouetteImage& image) {
  auto out = open_out(path, std::ios::binary);
  out << "P5\n" << image.width() << " " << image.height() << "\n255\n";
  std::vector<unsigned char> bytes(image.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = static_cast<unsigned char>(std::lround(255.0 * image[i]));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  finish(out, path);
}

SilhouetteImage read_silhouette(const std::filesystem::path& path) {
  const auto buf = read_all(path);
  const std::string where = "'" + path.string() + "'";
  std::size_t pos = 0;

  // Header tokens are separated by whitespace; '#' starts a comment line.
  const auto token = [&]() {
    while (pos < buf.size()) {
      if (std::isspace(buf[pos])) {
        ++pos;
      } else if (buf[pos] == '#') {
        while (pos < buf.size() && buf[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    std::string t;
    while (pos < buf.size() && !std::isspace(buf[pos])) t.push_back(static_cast<char>(buf[pos++]));
    if (t.empty()) throw FormatError(where + ": truncated PGM header");
    return t;
  };
  const auto number = [&]() {
    const std::string t = token();
    if (t.find_first_not_of("0123456789") != std::string::npos || t.size() > 6) {
      throw FormatError(where + ": bad PGM header field '" + t + "'");
    }
    return std::stoi(t);
  };

  if (token() != "P5") throw FormatError(where + ": not a binary PGM (P5)");
  const int width = number(), height = number(), maxval = number();
  if (width < 1 || height < 1) throw FormatError(where + ": invalid PGM dims");
  if (maxval != 255) throw FormatError(where + ": only maxval 255 is supported");
  if (pos >= buf.size() || !std::isspace(buf[pos])) throw FormatError(where + ": truncated PGM");
  ++pos;
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (buf.size() - pos != count) throw FormatError(where + ": PGM pixel count does not match dims");
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = buf[pos + i] / 255.0;
  return SilhouetteImage(height, width, std::move(values));
}

void write_mesh_obj(const std::filesystem::path& path, const TriangleMesh& mesh) {
  mesh.validate();
  auto out = open_out(path);
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
  finish(out, path);
}

void write_pointcloud_xyz(const std::filesystem::path& path, const PointCloud& cloud) {
  auto out = open_out(path);
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : cloud.points) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  finish(out, path);
}

PointCloud read_pointcloud_xyz(const std::filesystem::path& path, std::string unit) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  PointCloud cloud;
  cloud.unit = std::move(unit);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double x, y, z;
    std::string rest;
    if (!(ls >> x >> y >> z) || (ls >> rest) || !std::isfinite(x) || !std::isfinite(y) ||
        !std::isfinite(z)) {
      throw FormatError("'" + path.string() + "' line " + std::to_string(line_no) +
                        ": expected 'x y z'");
    }
    cloud.points.emplace_back(x, y, z);
  }
  return cloud;
}

}  // namespace voxsil
