// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace voxsil {

// Grid extents. Index (n, m, l) addresses row n (y axis, size h), column m
// (x axis, size w) and slice l (z axis, size d). Storage is n-major, then m,
// then l.
struct GridDims {
  int h = 32;
  int w = 32;
  int d = 32;

  std::size_t count() const {
    return static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
           static_cast<std::size_t>(d);
  }
  std::size_t index(int n, int m, int l) const {
    return (static_cast<std::size_t>(n) * static_cast<std::size_t>(w) +
            static_cast<std::size_t>(m)) *
               static_cast<std::size_t>(d) +
           static_cast<std::size_t>(l);
  }
  bool contains(int n, int m, int l) const {
    return n >= 0 && n < h && m >= 0 && m < w && l >= 0 && l < d;
  }
  bool operator==(const GridDims&) const = default;
};

std::string to_string(const GridDims& dims);

// Throws std::invalid_argument unless every extent is >= 1.
void validate_dims(const GridDims& dims);

// Voxel centers tile the cube [-0.5, 0.5]^3: voxel (n, m, l) sits at
// ((m + 0.5) / w - 0.5, (n + 0.5) / h - 0.5, (l + 0.5) / d - 0.5).
Eigen::Vector3d voxel_center(const GridDims& dims, int n, int m, int l);

// Continuous lattice coordinates (x along m, y along n, z along l) of an
// object-frame point. Voxel centers land on integers.
Eigen::Vector3d object_to_lattice(const GridDims& dims, const Eigen::Vector3d& p);
Eigen::Vector3d lattice_to_object(const GridDims& dims, const Eigen::Vector3d& q);

namespace detail {

template <typename T>
class DenseGrid {
 public:
  DenseGrid(GridDims dims, std::vector<T> values)
      : dims_(dims), values_(std::move(values)) {
    validate_dims(dims_);
    if (values_.size() != dims_.count()) {
      throw std::invalid_argument("grid value count " + std::to_string(values_.size()) +
                                  " does not match dims " + to_string(dims_));
    }
  }

  const GridDims& dims() const { return dims_; }
  std::size_t size() const { return values_.size(); }
  std::span<const T> values() const { return values_; }
  T operator()(int n, int m, int l) const { return values_[dims_.index(n, m, l)]; }
  T operator[](std::size_t i) const { return values_[i]; }

  bool operator==(const DenseGrid&) const = default;

 protected:
  GridDims dims_;
  std::vector<T> values_;
};

}  // namespace detail

// Occupancy field with values in [0, 1].
class VoxelGrid : public detail::DenseGrid<double> {
 public:
  VoxelGrid(GridDims dims, std::vector<double> values);
  explicit VoxelGrid(GridDims dims = {}, double fill = 0.0);
};

// Unbounded per-voxel correction added to a mean shape.
class ResidualGrid : public detail::DenseGrid<double> {
 public:
  ResidualGrid(GridDims dims, std::vector<double> values);
  explicit ResidualGrid(GridDims dims = {}, double fill = 0.0);
};

// Occupancy thresholded to exactly 0 or 1.
class BinaryVoxelGrid : public detail::DenseGrid<std::uint8_t> {
 public:
  BinaryVoxelGrid(GridDims dims, std::vector<std::uint8_t> values);
  explicit BinaryVoxelGrid(GridDims dims = {}, bool fill = false);

  std::size_t occupied_count() const;
  VoxelGrid to_occupancy() const;
};

}  // namespace voxsil
