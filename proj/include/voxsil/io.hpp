// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "voxsil/grid.hpp"
#include "voxsil/marching_cubes.hpp"
#include "voxsil/metrics.hpp"
#include "voxsil/projector.hpp"

namespace voxsil {

// Unreadable, unwritable or malformed file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// .vox32: magic "SILHVOX1", then h, w, d as little-endian uint32, then
// h*w*d little-endian float32 values in n, m, l order.
inline constexpr char kVoxMagic[8] = {'S', 'I', 'L', 'H', 'V', 'O', 'X', '1'};

void write_voxels(const std::filesystem::path& path, const VoxelGrid& grid);
VoxelGrid read_voxels(const std::filesystem::path& path);

// Binary PGM (P5, maxval 255); value v is stored as round(255 v).
void write_silhouette(const std::filesystem::path& path, const SilhouetteImage& image);
SilhouetteImage read_silhouette(const std::filesystem::path& path);

// ASCII OBJ: "v x y z" lines, then 1-based "f a b c" lines.
void write_mesh_obj(const std::filesystem::path& path, const TriangleMesh& mesh);

// ASCII XYZ: one "x y z" per line.
void write_pointcloud_xyz(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud read_pointcloud_xyz(const std::filesystem::path& path, std::string unit = "object");

}  // namespace voxsil
