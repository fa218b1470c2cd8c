// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "voxsil/grid.hpp"

namespace voxsil {

struct TriangleMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;

  // Throws std::invalid_argument on out-of-range or repeated indices.
  void validate() const;
};

// Isosurface of the occupancy field sampled at voxel centers, in object
// coordinates. Corners with value >= isolevel count as inside; triangles wind
// counter-clockwise when seen from outside. Isolevel must lie in (0, 1).
TriangleMesh marching_cubes(const VoxelGrid& grid, double isolevel);

namespace detail {

// Triangles for each of the 256 corner configurations, as triples of cube
// edge ids. Corner i sits at offset (i & 1, (i >> 1) & 1, (i >> 2) & 1) along
// (x, y, z); bit i of the case index marks corner i inside.
const std::array<std::vector<std::array<int, 3>>, 256>& marching_cubes_table();

// Corner pair joined by each cube edge.
const std::array<std::array<int, 2>, 12>& marching_cubes_edges();

}  // namespace detail

}  // namespace voxsil
