// SPDX-License-Identifier: Apache-2.0
#include "voxsil/camera.hpp"

#include <cmath>
#include <stdexcept>

namespace voxsil {

double wrap_degrees(double deg) {
  if (!std::isfinite(deg)) throw std::invalid_argument("angle must be finite");
  double out = std::fmod(deg, 360.0);
  if (out < 0.0) out += 360.0;
  if (out >= 360.0) out = 0.0;
  return out;
}

Viewpoint::Viewpoint(double azimuth_deg, double elevation_deg)
    : azimuth_deg_(wrap_degrees(azimuth_deg)), elevation_deg_(elevation_deg) {
  if (!(elevation_deg >= 0.0 && elevation_deg <= kMaxElevationDeg)) {
    throw std::invalid_argument("elevation " + std::to_string(elevation_deg) +
                                " deg outside [0, 40]");
  }
}

Viewpoint Viewpoint::from_radians(double azimuth_rad, double elevation_rad) {
  return Viewpoint(azimuth_rad * kRadToDeg, elevation_rad * kRadToDeg);
}

std::string to_string(ElevationAxis axis) {
  return axis == ElevationAxis::Paper ? "paper" : "conventional";
}

ElevationAxis elevation_axis_from_string(const std::string& s) {
  if (s == "paper") return ElevationAxis::Paper;
  if (s == "conventional") return ElevationAxis::Conventional;
  throw std::invalid_argument("unknown elevation_axis '" + s + "'");
}

void CameraModel::validate() const {
  if (!(intrinsics.focal > 0.0)) throw std::invalid_argument("focal length must be positive");
  if (!std::isfinite(intrinsics.cx) || !std::isfinite(intrinsics.cy)) {
    throw std::invalid_argument("principal point must be finite");
  }
  if (!(distance > std::sqrt(3.0) / 2.0)) {
    throw std::invalid_argument("camera distance must exceed sqrt(3)/2");
  }
  if (image_height < 1 || image_width < 1 || depth_samples < 1) {
    throw std::invalid_argument("image dims and depth samples must be >= 1");
  }
  if (!(depth_half_range > 0.0) || !(depth_half_range < distance)) {
    throw std::invalid_argument("depth range must be positive and in front of the camera");
  }
}

CameraModel CameraModel::square(int size, int depth_samples) {
  CameraModel cam;
  cam.image_height = size;
  cam.image_width = size;
  cam.depth_samples = depth_samples;
  cam.intrinsics.focal = static_cast<double>(size);
  cam.intrinsics.cx = (size - 1) / 2.0;
  cam.intrinsics.cy = (size - 1) / 2.0;
  return cam;
}

namespace {

Eigen::Matrix3d azimuth_factor(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d r;
  r << c, 0, s,
       0, 1, 0,
      -s, 0, c;
  return r;
}

Eigen::Matrix3d azimuth_factor_derivative(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d r;
  r << -s, 0, c,
        0, 0, 0,
       -c, 0, -s;
  return r;
}

Eigen::Matrix3d elevation_factor(double e, ElevationAxis axis) {
  const double c = std::cos(e), s = std::sin(e);
  Eigen::Matrix3d r;
  if (axis == ElevationAxis::Paper) {
    r << c, s, 0,
        -s, c, 0,
         0, 0, 1;
  } else {
    r << 1, 0, 0,
         0, c, s,
         0, -s, c;
  }
  return r;
}

Eigen::Matrix3d elevation_factor_derivative(double e, ElevationAxis axis) {
  const double c = std::cos(e), s = std::sin(e);
  Eigen::Matrix3d r;
  if (axis == ElevationAxis::Paper) {
    r << -s, c, 0,
         -c, -s, 0,
          0, 0, 0;
  } else {
    r << 0, 0, 0,
         0, -s, c,
         0, -c, -s;
  }
  return r;
}

}  // namespace

Eigen::Matrix3d rotation_from_angles(double azimuth_rad, double elevation_rad, ElevationAxis axis) {
  return azimuth_factor(azimuth_rad) * elevation_factor(elevation_rad, axis);
}

Eigen::Matrix3d rotation_from_viewpoint(const Viewpoint& v, ElevationAxis axis) {
  return rotation_from_angles(v.azimuth_rad(), v.elevation_rad(), axis);
}

RotationJacobian rotation_jacobian(double azimuth_rad, double elevation_rad, ElevationAxis axis) {
  return {azimuth_factor_derivative(azimuth_rad) * elevation_factor(elevation_rad, axis),
          azimuth_factor(azimuth_rad) * elevation_factor_derivative(elevation_rad, axis)};
}

Eigen::Matrix4d projection_matrix(const CameraModel& cam, const Viewpoint& v) {
  Eigen::Matrix4d intrinsic = Eigen::Matrix4d::Identity();
  intrinsic(0, 0) = cam.intrinsics.focal;
  intrinsic(1, 1) = cam.intrinsics.focal;
  intrinsic(0, 2) = cam.intrinsics.cx;
  intrinsic(1, 2) = cam.intrinsics.cy;

  Eigen::Matrix4d extrinsic = Eigen::Matrix4d::Identity();
  extrinsic.topLeftCorner<3, 3>() = rotation_from_viewpoint(v, cam.elevation_axis);
  extrinsic(2, 3) = cam.distance;
  return intrinsic * extrinsic;
}

PixelProjection object_to_pixel(const CameraModel& cam, const Viewpoint& v,
                                const Eigen::Vector3d& point) {
  if (!point.allFinite()) throw std::invalid_argument("object_to_pixel: non-finite point");
  const Eigen::Vector3d pc =
      rotation_from_viewpoint(v, cam.elevation_axis) * point + Eigen::Vector3d(0, 0, cam.distance);
  if (!(pc.z() > 0.0)) throw std::domain_error("object_to_pixel: point behind the camera");
  return {cam.intrinsics.focal * pc.x() / pc.z() + cam.intrinsics.cx,
          cam.intrinsics.focal * pc.y() / pc.z() + cam.intrinsics.cy, pc.z()};
}

}  // namespace voxsil
