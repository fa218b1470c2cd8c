// SPDX-License-Identifier: Apache-2.0
#include "voxsil/grid.hpp"

#include <algorithm>
#include <cmath>

namespace voxsil {

std::string to_string(const GridDims& dims) {
  return std::to_string(dims.h) + "x" + std::to_string(dims.w) + "x" + std::to_string(dims.d);
}

void validate_dims(const GridDims& dims) {
  if (dims.h < 1 || dims.w < 1 || dims.d < 1) {
    throw std::invalid_argument("grid dims must be positive, got " + to_string(dims));
  }
}

Eigen::Vector3d voxel_center(const GridDims& dims, int n, int m, int l) {
  return {(m + 0.5) / dims.w - 0.5, (n + 0.5) / dims.h - 0.5, (l + 0.5) / dims.d - 0.5};
}

Eigen::Vector3d object_to_lattice(const GridDims& dims, const Eigen::Vector3d& p) {
  return {(p.x() + 0.5) * dims.w - 0.5, (p.y() + 0.5) * dims.h - 0.5,
          (p.z() + 0.5) * dims.d - 0.5};
}

Eigen::Vector3d lattice_to_object(const GridDims& dims, const Eigen::Vector3d& q) {
  return {(q.x() + 0.5) / dims.w - 0.5, (q.y() + 0.5) / dims.h - 0.5,
          (q.z() + 0.5) / dims.d - 0.5};
}

VoxelGrid::VoxelGrid(GridDims dims, std::vector<double> values)
    : DenseGrid(dims, std::move(values)) {
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("occupancy value " + std::to_string(v) + " outside [0, 1]");
    }
  }
}

VoxelGrid::VoxelGrid(GridDims dims, double fill)
    : VoxelGrid(dims, std::vector<double>(dims.h > 0 && dims.w > 0 && dims.d > 0 ? dims.count() : 0, fill)) {}

ResidualGrid::ResidualGrid(GridDims dims, std::vector<double> values)
    : DenseGrid(dims, std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("residual values must be finite");
  }
}

ResidualGrid::ResidualGrid(GridDims dims, double fill)
    : ResidualGrid(dims, std::vector<double>(dims.h > 0 && dims.w > 0 && dims.d > 0 ? dims.count() : 0, fill)) {}

BinaryVoxelGrid::BinaryVoxelGrid(GridDims dims, std::vector<std::uint8_t> values)
    : DenseGrid(dims, std::move(values)) {
  for (auto v : values_) {
    if (v > 1) throw std::invalid_argument("binary voxel values must be 0 or 1");
  }
}

BinaryVoxelGrid::BinaryVoxelGrid(GridDims dims, bool fill)
    : BinaryVoxelGrid(dims, std::vector<std::uint8_t>(dims.h > 0 && dims.w > 0 && dims.d > 0 ? dims.count() : 0,
                                                      fill ? 1 : 0)) {}

std::size_t BinaryVoxelGrid::occupied_count() const {
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), std::uint8_t{1}));
}

VoxelGrid BinaryVoxelGrid::to_occupancy() const {
  return VoxelGrid(dims_, std::vector<double>(values_.begin(), values_.end()));
}

}  // namespace voxsil
