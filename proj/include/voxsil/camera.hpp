// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numbers>
#include <string>

#include <Eigen/Core>

namespace voxsil {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

inline constexpr double kMaxElevationDeg = 40.0;

// Camera rotation about the object center. Azimuth is wrapped into [0, 360);
// elevation outside [0, 40] is rejected.
class Viewpoint {
 public:
  Viewpoint() = default;
  Viewpoint(double azimuth_deg, double elevation_deg);

  static Viewpoint from_radians(double azimuth_rad, double elevation_rad);

  double azimuth_deg() const { return azimuth_deg_; }
  double elevation_deg() const { return elevation_deg_; }
  double azimuth_rad() const { return azimuth_deg_ * kDegToRad; }
  double elevation_rad() const { return elevation_deg_ * kDegToRad; }

  bool operator==(const Viewpoint&) const = default;

 private:
  double azimuth_deg_ = 0.0;
  double elevation_deg_ = 0.0;
};

// Wraps any finite angle into [0, 360).
double wrap_degrees(double deg);

struct Intrinsics {
  double focal = 64.0;  // pixels
  double cx = 31.5;
  double cy = 31.5;
};

// "paper": the elevation factor is [[c, s, 0], [-s, c, 0], [0, 0, 1]], mixing
// x and y. "conventional": elevation tilts about x.
enum class ElevationAxis { Paper, Conventional };

std::string to_string(ElevationAxis axis);
ElevationAxis elevation_axis_from_string(const std::string& s);

struct CameraModel {
  Intrinsics intrinsics;
  double distance = 1.7;           // object center to camera center, object units
  int image_height = 64;
  int image_width = 64;
  int depth_samples = 64;
  double depth_half_range = 0.75;  // samples span [distance - r, distance + r]
  ElevationAxis elevation_axis = ElevationAxis::Paper;

  // Camera-frame depth of sample l' (cell-centered in the depth range).
  double sample_depth(int l) const {
    return distance - depth_half_range + (l + 0.5) * (2.0 * depth_half_range) / depth_samples;
  }
  double depth_step() const { return 2.0 * depth_half_range / depth_samples; }

  // Throws std::invalid_argument on a violated invariant.
  void validate() const;

  // Defaults scaled to a square image of `size` pixels.
  static CameraModel square(int size, int depth_samples);
};

// R = R_az * R_el.
Eigen::Matrix3d rotation_from_viewpoint(const Viewpoint& v,
                                        ElevationAxis axis = ElevationAxis::Paper);
Eigen::Matrix3d rotation_from_angles(double azimuth_rad, double elevation_rad,
                                     ElevationAxis axis = ElevationAxis::Paper);

// Partial derivatives of R with respect to azimuth and elevation (radians).
struct RotationJacobian {
  Eigen::Matrix3d d_azimuth;
  Eigen::Matrix3d d_elevation;
};
RotationJacobian rotation_jacobian(double azimuth_rad, double elevation_rad,
                                   ElevationAxis axis = ElevationAxis::Paper);

// [K 0; 0 1] * [R t; 0 1] with t = (0, 0, distance).
Eigen::Matrix4d projection_matrix(const CameraModel& cam, const Viewpoint& v);

struct PixelProjection {
  double u;
  double v;
  double depth;
};

// Rigid transform into the camera frame followed by perspective division.
// Throws std::domain_error when the point does not lie in front of the camera.
PixelProjection object_to_pixel(const CameraModel& cam, const Viewpoint& v,
                                const Eigen::Vector3d& point);

}  // namespace voxsil
