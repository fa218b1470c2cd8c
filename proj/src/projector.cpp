// SPDX-License-Identifier: Apache-2.0
#include "voxsil/projector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace voxsil {

ResampledVolume::ResampledVolume(GridDims dims, std::vector<double> values)
    : DenseGrid(dims, std::move(values)) {
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("resampled value outside [0, 1]");
  }
}

SilhouetteImage::SilhouetteImage(int height, int width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
  if (height < 1 || width < 1) throw std::invalid_argument("silhouette dims must be positive");
  if (values_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
    throw std::invalid_argument("silhouette value count does not match dims");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("silhouette value outside [0, 1]");
  }
}

SilhouetteImage::SilhouetteImage(int height, int width, double fill)
    : SilhouetteImage(height, width,
                      std::vector<double>(height > 0 && width > 0
                                              ? static_cast<std::size_t>(height) * width
                                              : 0,
                                          fill)) {}

std::size_t SilhouetteImage::foreground_count(double level) const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [level](double v) { return v >= level; }));
}

namespace {

// Maps output cells of one view to continuous lattice coordinates of the grid.
// Along a pixel ray the lattice position is affine in the depth index:
// q(l') = origin + l' * step.
class ViewGeometry {
 public:
  ViewGeometry(const GridDims& dims, const CameraModel& cam, double azimuth_rad,
               double elevation_rad)
      : dims_(dims), cam_(cam) {
    cam.validate();
    const Eigen::Matrix3d rt = rotation_from_angles(azimuth_rad, elevation_rad, cam.elevation_axis)
                                   .transpose();
    const Eigen::Vector3d scale(dims.w, dims.h, dims.d);
    scaled_rt_ = scale.asDiagonal() * rt;
    offset_ = 0.5 * scale - Eigen::Vector3d::Constant(0.5);
    const RotationJacobian jac = rotation_jacobian(azimuth_rad, elevation_rad, cam.elevation_axis);
    d_az_ = scale.asDiagonal() * jac.d_azimuth.transpose();
    d_el_ = scale.asDiagonal() * jac.d_elevation.transpose();
  }

  // Camera-frame point minus translation, (z*dx, z*dy, z - distance).
  Eigen::Vector3d centered_camera_point(int row, int col, int l) const {
    const double z = cam_.sample_depth(l);
    return {z * (col - cam_.intrinsics.cx) / cam_.intrinsics.focal,
            z * (row - cam_.intrinsics.cy) / cam_.intrinsics.focal, z - cam_.distance};
  }

  Eigen::Vector3d lattice(int row, int col, int l) const {
    return scaled_rt_ * centered_camera_point(row, col, l) + offset_;
  }

  Eigen::Vector3d d_lattice_d_azimuth(int row, int col, int l) const {
    return d_az_ * centered_camera_point(row, col, l);
  }
  Eigen::Vector3d d_lattice_d_elevation(int row, int col, int l) const {
    return d_el_ * centered_camera_point(row, col, l);
  }

  // Depth indices whose samples may touch the grid; every sample outside the
  // returned range interpolates to exactly zero.
  std::pair<int, int> active_range(int row, int col) const {
    const int last = cam_.depth_samples - 1;
    const Eigen::Vector3d q0 = lattice(row, col, 0);
    const Eigen::Vector3d step = last > 0 ? Eigen::Vector3d(lattice(row, col, 1) - q0)
                                          : Eigen::Vector3d::Zero();
    double lo = 0.0, hi = last;
    const double extent[3] = {double(dims_.w), double(dims_.h), double(dims_.d)};
    for (int k = 0; k < 3; ++k) {
      if (std::abs(step[k]) < 1e-300) {
        if (!(q0[k] > -1.0 && q0[k] < extent[k])) return {1, 0};
        continue;
      }
      double a = (-1.0 - q0[k]) / step[k];
      double b = (extent[k] - q0[k]) / step[k];
      if (a > b) std::swap(a, b);
      lo = std::max(lo, a);
      hi = std::min(hi, b);
    }
    if (lo > hi) return {1, 0};
    return {std::max(0, static_cast<int>(std::floor(lo)) - 1),
            std::min(last, static_cast<int>(std::ceil(hi)) + 1)};
  }

 private:
  GridDims dims_;
  const CameraModel& cam_;
  Eigen::Matrix3d scaled_rt_;
  Eigen::Vector3d offset_;
  Eigen::Matrix3d d_az_;
  Eigen::Matrix3d d_el_;
};

struct Corners {
  int count = 0;
  std::size_t index[8];
  double weight[8];
  Eigen::Vector3d d_weight[8];  // derivative of the weight w.r.t. q
};

// In-grid neighbors of q with their tent weights.
Corners corners_at(const GridDims& dims, const Eigen::Vector3d& q) {
  Corners c;
  const double fx = std::floor(q.x()), fy = std::floor(q.y()), fz = std::floor(q.z());
  const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy), z0 = static_cast<int>(fz);
  const double tx = q.x() - fx, ty = q.y() - fy, tz = q.z() - fz;
  const double wx[2] = {1.0 - tx, tx}, wy[2] = {1.0 - ty, ty}, wz[2] = {1.0 - tz, tz};
  const double dx[2] = {-1.0, 1.0};
  for (int a = 0; a < 2; ++a) {
    const int n = y0 + a;
    if (n < 0 || n >= dims.h) continue;
    for (int b = 0; b < 2; ++b) {
      const int m = x0 + b;
      if (m < 0 || m >= dims.w) continue;
      for (int e = 0; e < 2; ++e) {
        const int l = z0 + e;
        if (l < 0 || l >= dims.d) continue;
        c.index[c.count] = dims.index(n, m, l);
        c.weight[c.count] = wx[b] * wy[a] * wz[e];
        c.d_weight[c.count] = Eigen::Vector3d(dx[b] * wy[a] * wz[e], wx[b] * dx[a] * wz[e],
                                              wx[b] * wy[a] * dx[e]);
        ++c.count;
      }
    }
  }
  return c;
}

double sample_value(const VoxelGrid& grid, const Eigen::Vector3d& q) {
  const GridDims& dims = grid.dims();
  const double fx = std::floor(q.x()), fy = std::floor(q.y()), fz = std::floor(q.z());
  const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy), z0 = static_cast<int>(fz);
  if (x0 < -1 || x0 >= dims.w || y0 < -1 || y0 >= dims.h || z0 < -1 || z0 >= dims.d) return 0.0;
  const double tx = q.x() - fx, ty = q.y() - fy, tz = q.z() - fz;
  const double wx[2] = {1.0 - tx, tx}, wy[2] = {1.0 - ty, ty}, wz[2] = {1.0 - tz, tz};
  const auto values = grid.values();
  double sum = 0.0;
  for (int a = 0; a < 2; ++a) {
    const int n = y0 + a;
    if (n < 0 || n >= dims.h) continue;
    for (int b = 0; b < 2; ++b) {
      const int m = x0 + b;
      if (m < 0 || m >= dims.w) continue;
      const std::size_t row = dims.index(n, m, 0);
      const double wxy = wx[b] * wy[a];
      if (z0 >= 0) sum += wxy * wz[0] * values[row + z0];
      if (z0 + 1 < dims.d) sum += wxy * wz[1] * values[row + z0 + 1];
    }
  }
  return std::min(sum, 1.0);
}

struct PixelTrace {
  double value = 0.0;
  int argmax = 0;
};

PixelTrace trace_hard(const VoxelGrid& grid, const ViewGeometry& geom, int row, int col) {
  const auto [lo, hi] = geom.active_range(row, col);
  PixelTrace out;  // samples below `lo` read exactly zero
  bool seeded = lo > 0 || lo > hi;
  for (int l = lo; l <= hi; ++l) {
    const double u = sample_value(grid, geom.lattice(row, col, l));
    if (!seeded || u > out.value) {
      out.value = u;
      out.argmax = l;
      seeded = true;
    }
  }
  return out;
}

void validate_target(const CameraModel& cam, const SilhouetteImage& target) {
  if (target.height() != cam.image_height || target.width() != cam.image_width) {
    throw std::invalid_argument("target silhouette dims do not match the camera image dims");
  }
}

}  // namespace

Eigen::Vector3d sample_point_object(const CameraModel& cam, const Viewpoint& view, int row, int col,
                                    int depth_index) {
  const double z = cam.sample_depth(depth_index);
  const Eigen::Vector3d pc(z * (col - cam.intrinsics.cx) / cam.intrinsics.focal,
                           z * (row - cam.intrinsics.cy) / cam.intrinsics.focal, z);
  return rotation_from_viewpoint(view, cam.elevation_axis).transpose() *
         (pc - Eigen::Vector3d(0, 0, cam.distance));
}

ResampledVolume resample_volume(const VoxelGrid& grid, const CameraModel& cam,
                                const Viewpoint& view) {
  const ViewGeometry geom(grid.dims(), cam, view.azimuth_rad(), view.elevation_rad());
  const GridDims out_dims{cam.image_height, cam.image_width, cam.depth_samples};
  std::vector<double> values(out_dims.count(), 0.0);
  for (int row = 0; row < cam.image_height; ++row) {
    for (int col = 0; col < cam.image_width; ++col) {
      const auto [lo, hi] = geom.active_range(row, col);
      for (int l = lo; l <= hi; ++l) {
        values[out_dims.index(row, col, l)] = sample_value(grid, geom.lattice(row, col, l));
      }
    }
  }
  return ResampledVolume(out_dims, std::move(values));
}

FlattenedSilhouette flatten_silhouette(const ResampledVolume& volume) {
  const GridDims& dims = volume.dims();
  std::vector<double> image(static_cast<std::size_t>(dims.h) * dims.w);
  std::vector<int> argmax(image.size());
  for (int row = 0; row < dims.h; ++row) {
    for (int col = 0; col < dims.w; ++col) {
      const std::size_t base = dims.index(row, col, 0);
      int best = 0;
      for (int l = 1; l < dims.d; ++l) {
        if (volume[base + l] > volume[base + best]) best = l;
      }
      const std::size_t p = static_cast<std::size_t>(row) * dims.w + col;
      image[p] = volume[base + best];
      argmax[p] = best;
    }
  }
  return {SilhouetteImage(dims.h, dims.w, std::move(image)), std::move(argmax)};
}

SilhouetteImage render_silhouette(const VoxelGrid& grid, const CameraModel& cam,
                                  const Viewpoint& view) {
  const ViewGeometry geom(grid.dims(), cam, view.azimuth_rad(), view.elevation_rad());
  std::vector<double> image(static_cast<std::size_t>(cam.image_height) * cam.image_width);
  for (int row = 0; row < cam.image_height; ++row) {
    for (int col = 0; col < cam.image_width; ++col) {
      image[static_cast<std::size_t>(row) * cam.image_width + col] =
          trace_hard(grid, geom, row, col).value;
    }
  }
  return SilhouetteImage(cam.image_height, cam.image_width, std::move(image));
}

double silhouette_loss(const SilhouetteImage& pred, const SilhouetteImage& target) {
  if (pred.height() != target.height() || pred.width() != target.width()) {
    throw std::invalid_argument("silhouette_loss: dims mismatch");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = target[i] - pred[i];
    loss += diff * diff;
  }
  return loss;
}

RenderResult render_with_gradients(const VoxelGrid& grid, const CameraModel& cam,
                                   const Viewpoint& view, const SilhouetteImage& target,
                                   const RenderOptions& options) {
  validate_target(cam, target);
  const GridDims& dims = grid.dims();
  const ViewGeometry geom(dims, cam, view.azimuth_rad(), view.elevation_rad());
  const double tau = options.smooth_max_temperature;
  const auto values = grid.values();

  RenderGradients grads;
  grads.dims = dims;
  if (options.voxel_gradients) grads.d_loss_d_voxels.assign(dims.count(), 0.0);

  std::vector<double> image(target.size());
  double loss = 0.0;

  // Adds upstream * dU/d(voxels, angles) for the sample at (row, col, l).
  auto backprop_sample = [&](int row, int col, int l, double upstream) {
    const Eigen::Vector3d q = geom.lattice(row, col, l);
    const Corners c = corners_at(dims, q);
    if (c.count == 0) return;
    if (options.voxel_gradients) {
      for (int k = 0; k < c.count; ++k) grads.d_loss_d_voxels[c.index[k]] += upstream * c.weight[k];
    }
    if (options.angle_gradients) {
      Eigen::Vector3d d_u_d_q = Eigen::Vector3d::Zero();
      for (int k = 0; k < c.count; ++k) d_u_d_q += values[c.index[k]] * c.d_weight[k];
      grads.d_loss_d_azimuth += upstream * d_u_d_q.dot(geom.d_lattice_d_azimuth(row, col, l));
      grads.d_loss_d_elevation += upstream * d_u_d_q.dot(geom.d_lattice_d_elevation(row, col, l));
    }
  };

  std::vector<double> column;
  for (int row = 0; row < cam.image_height; ++row) {
    for (int col = 0; col < cam.image_width; ++col) {
      const std::size_t p = static_cast<std::size_t>(row) * cam.image_width + col;
      if (tau <= 0.0) {
        const PixelTrace t = trace_hard(grid, geom, row, col);
        image[p] = t.value;
        const double residual = t.value - target[p];
        loss += residual * residual;
        if (residual != 0.0) backprop_sample(row, col, t.argmax, 2.0 * residual);
        continue;
      }

      // Smooth max over every depth sample, zeros included.
      const int depth = cam.depth_samples;
      column.assign(depth, 0.0);
      const auto [lo, hi] = geom.active_range(row, col);
      for (int l = lo; l <= hi; ++l) column[l] = sample_value(grid, geom.lattice(row, col, l));
      const double peak = *std::max_element(column.begin(), column.end());
      double total = 0.0;
      for (double& u : column) {
        u = std::exp((u - peak) / tau);
        total += u;
      }
      const double s =
          std::clamp(peak + tau * std::log(total / static_cast<double>(depth)), 0.0, 1.0);
      image[p] = s;
      const double residual = s - target[p];
      loss += residual * residual;
      if (residual == 0.0) continue;
      for (int l = std::max(lo, 0); l <= hi; ++l) {
        backprop_sample(row, col, l, 2.0 * residual * column[l] / total);
      }
      // Samples outside [lo, hi] read zero regardless of voxels or angles.
    }
  }

  return {loss, SilhouetteImage(cam.image_height, cam.image_width, std::move(image)),
          std::move(grads)};
}

}  // namespace voxsil
