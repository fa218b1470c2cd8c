// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>

#include <Eigen/Core>

#include "voxsil/grid.hpp"

namespace voxsil {

enum class Primitive { Box, Sphere, Cylinder, Mug, Chair };

std::string to_string(Primitive p);
Primitive primitive_from_string(const std::string& s);

// Analytic solid used to produce test shapes. Dimensions are in object units
// (the unit cube [-0.5, 0.5]^3). Parameter names per primitive:
//   all:      cx, cy, cz (center, default 0)
//   box:      sx, sy, sz (half extents, default 0.25)
//   sphere:   radius (0.35)
//   cylinder: radius (0.25), half_height (0.35); axis along y
//   mug:      radius (0.2), half_height (0.25), handle_radius (0.12),
//             handle_thickness (0.04); the handle is a half torus on +x
//   chair:    seat_width (0.6), seat_depth (0.6), seat_thickness (0.08),
//             leg_height (0.35), leg_thickness (0.08), back_height (0.4),
//             back_thickness (0.08); the back sits on the -z edge
struct SyntheticShapeSpec {
  Primitive primitive = Primitive::Sphere;
  std::map<std::string, double> parameters;
  GridDims resolution{};

  // Parameter value or its default; throws on names the primitive lacks.
  double param(const std::string& name) const;
  // Throws std::invalid_argument for unknown names or a solid leaving the cube.
  void validate() const;
  bool contains(const Eigen::Vector3d& p) const;
};

// Voxel set where the center passes the primitive's inside test.
BinaryVoxelGrid voxelize_primitive(const SyntheticShapeSpec& spec);

}  // namespace voxsil
