// SPDX-License-Identifier: Apache-2.0
#include "voxsil/synthetic.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace voxsil {

namespace {

const std::map<std::string, double>& defaults_for(Primitive p) {
  static const std::map<std::string, double> box{
      {"cx", 0}, {"cy", 0}, {"cz", 0}, {"sx", 0.25}, {"sy", 0.25}, {"sz", 0.25}};
  static const std::map<std::string, double> sphere{
      {"cx", 0}, {"cy", 0}, {"cz", 0}, {"radius", 0.35}};
  static const std::map<std::string, double> cylinder{
      {"cx", 0}, {"cy", 0}, {"cz", 0}, {"radius", 0.25}, {"half_height", 0.35}};
  static const std::map<std::string, double> mug{
      {"cx", 0},           {"cy", 0},          {"cz", 0},
      {"radius", 0.2},     {"half_height", 0.25}, {"handle_radius", 0.12},
      {"handle_thickness", 0.04}};
  static const std::map<std::string, double> chair{
      {"cx", 0},             {"cy", 0},           {"cz", 0},
      {"seat_width", 0.6},   {"seat_depth", 0.6}, {"seat_thickness", 0.08},
      {"leg_height", 0.35},  {"leg_thickness", 0.08}, {"back_height", 0.4},
      {"back_thickness", 0.08}};
  switch (p) {
    case Primitive::Box: return box;
    case Primitive::Sphere: return sphere;
    case Primitive::Cylinder: return cylinder;
    case Primitive::Mug: return mug;
    case Primitive::Chair: return chair;
  }
  throw std::logic_error("unhandled primitive");
}

struct Aabb {
  Eigen::Vector3d lo;
  Eigen::Vector3d hi;
  bool contains(const Eigen::Vector3d& p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }
};

Aabb centered_box(const Eigen::Vector3d& c, const Eigen::Vector3d& half) {
  return {c - half, c + half};
}

std::vector<Aabb> chair_parts(const SyntheticShapeSpec& s) {
  const Eigen::Vector3d c(s.param("cx"), s.param("cy"), s.param("cz"));
  const double w = s.param("seat_width"), dep = s.param("seat_depth");
  const double seat_t = s.param("seat_thickness"), leg_h = s.param("leg_height");
  const double leg_t = s.param("leg_thickness"), back_h = s.param("back_height");
  const double back_t = s.param("back_thickness");
  const double bottom = c.y() - (leg_h + seat_t + back_h) / 2.0;
  const double seat_top = bottom + leg_h + seat_t;

  std::vector<Aabb> parts;
  for (double sx : {-1.0, 1.0}) {
    for (double sz : {-1.0, 1.0}) {
      const double x = c.x() + sx * (w - leg_t) / 2.0;
      const double z = c.z() + sz * (dep - leg_t) / 2.0;
      parts.push_back({{x - leg_t / 2, bottom, z - leg_t / 2}, {x + leg_t / 2, bottom + leg_h, z + leg_t / 2}});
    }
  }
  parts.push_back({{c.x() - w / 2, bottom + leg_h, c.z() - dep / 2}, {c.x() + w / 2, seat_top, c.z() + dep / 2}});
  parts.push_back({{c.x() - w / 2, seat_top, c.z() - dep / 2},
                   {c.x() + w / 2, seat_top + back_h, c.z() - dep / 2 + back_t}});
  return parts;
}

Aabb bounds(const SyntheticShapeSpec& s) {
  const Eigen::Vector3d c(s.param("cx"), s.param("cy"), s.param("cz"));
  switch (s.primitive) {
    case Primitive::Box:
      return centered_box(c, {s.param("sx"), s.param("sy"), s.param("sz")});
    case Primitive::Sphere:
      return centered_box(c, Eigen::Vector3d::Constant(s.param("radius")));
    case Primitive::Cylinder: {
      const double r = s.param("radius");
      return centered_box(c, {r, s.param("half_height"), r});
    }
    case Primitive::Mug: {
      const double r = s.param("radius"), hh = s.param("half_height");
      const double big = s.param("handle_radius"), small = s.param("handle_thickness");
      Aabb box = centered_box(c, {r, hh, r});
      box.hi.x() = std::max(box.hi.x(), c.x() + r + big + small);
      box.lo.y() = std::min(box.lo.y(), c.y() - big - small);
      box.hi.y() = std::max(box.hi.y(), c.y() + big + small);
      box.lo.z() = std::min(box.lo.z(), c.z() - small);
      box.hi.z() = std::max(box.hi.z(), c.z() + small);
      return box;
    }
    case Primitive::Chair: {
      const auto parts = chair_parts(s);
      Aabb box = parts.front();
      for (const auto& p : parts) {
        box.lo = box.lo.cwiseMin(p.lo);
        box.hi = box.hi.cwiseMax(p.hi);
      }
      return box;
    }
  }
  throw std::logic_error("unhandled primitive");
}

}  // namespace

std::string to_string(Primitive p) {
  switch (p) {
    case Primitive::Box: return "box";
    case Primitive::Sphere: return "sphere";
    case Primitive::Cylinder: return "cylinder";
    case Primitive::Mug: return "mug";
    case Primitive::Chair: return "chair";
  }
  throw std::logic_error("unhandled primitive");
}

Primitive primitive_from_string(const std::string& s) {
  for (Primitive p : {Primitive::Box, Primitive::Sphere, Primitive::Cylinder, Primitive::Mug,
                      Primitive::Chair}) {
    if (to_string(p) == s) return p;
  }
  throw std::invalid_argument("unknown primitive '" + s + "'");
}

double SyntheticShapeSpec::param(const std::string& name) const {
  const auto& defaults = defaults_for(primitive);
  const auto def = defaults.find(name);
  if (def == defaults.end()) {
    throw std::invalid_argument("primitive " + to_string(primitive) + " has no parameter '" + name + "'");
  }
  const auto it = parameters.find(name);
  return it == parameters.end() ? def->second : it->second;
}

void SyntheticShapeSpec::validate() const {
  validate_dims(resolution);
  const auto& defaults = defaults_for(primitive);
  for (const auto& [name, value] : parameters) {
    if (!defaults.contains(name)) {
      throw std::invalid_argument("primitive " + to_string(primitive) + " has no parameter '" +
                                  name + "'");
    }
    if (!std::isfinite(value)) throw std::invalid_argument("parameter '" + name + "' not finite");
    if (name[0] != 'c' && value < 0.0) {
      throw std::invalid_argument("parameter '" + name + "' must be non-negative");
    }
  }
  const Aabb box = bounds(*this);
  constexpr double kSlack = 1e-12;
  if ((box.lo.array() < -0.5 - kSlack).any() || (box.hi.array() > 0.5 + kSlack).any()) {
    throw std::invalid_argument(to_string(primitive) + " exceeds the unit object cube");
  }
}

bool SyntheticShapeSpec::contains(const Eigen::Vector3d& p) const {
  const Eigen::Vector3d c(param("cx"), param("cy"), param("cz"));
  const Eigen::Vector3d d = p - c;
  switch (primitive) {
    case Primitive::Box:
      return centered_box(c, {param("sx"), param("sy"), param("sz")}).contains(p);
    case Primitive::Sphere: {
      const double r = param("radius");
      return r > 0.0 && d.squaredNorm() <= r * r;
    }
    case Primitive::Cylinder: {
      const double r = param("radius");
      return r > 0.0 && std::abs(d.y()) <= param("half_height") &&
             d.x() * d.x() + d.z() * d.z() <= r * r;
    }
    case Primitive::Mug: {
      const double r = param("radius");
      if (r > 0.0 && std::abs(d.y()) <= param("half_height") && d.x() * d.x() + d.z() * d.z() <= r * r) {
        return true;
      }
      // Half torus in the xy plane, hinged on the body's +x side.
      const double hx = d.x() - r;
      if (hx < 0.0) return false;
      const double ring = std::hypot(hx, d.y()) - param("handle_radius");
      const double t = param("handle_thickness");
      return t > 0.0 && ring * ring + d.z() * d.z() <= t * t;
    }
    case Primitive::Chair:
      for (const auto& part : chair_parts(*this)) {
        if (part.contains(p)) return true;
      }
      return false;
  }
  throw std::logic_error("unhandled primitive");
}

BinaryVoxelGrid voxelize_primitive(const SyntheticShapeSpec& spec) {
  spec.validate();
  const GridDims& dims = spec.resolution;
  std::vector<std::uint8_t> values(dims.count(), 0);
  for (int n = 0; n < dims.h; ++n) {
    for (int m = 0; m < dims.w; ++m) {
      for (int l = 0; l < dims.d; ++l) {
        values[dims.index(n, m, l)] = spec.contains(voxel_center(dims, n, m, l)) ? 1 : 0;
      }
    }
  }
  return BinaryVoxelGrid(dims, std::move(values));
}

}  // namespace voxsil
