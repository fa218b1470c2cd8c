// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "voxsil/camera.hpp"
#include "voxsil/grid.hpp"

namespace voxsil {

// Camera-aligned occupancy volume of size H' x W' x D' (dims.h, dims.w,
// dims.d). Cell (n', m', l') holds the trilinear sample at pixel row n',
// column m' and the l'-th depth sample.
class ResampledVolume : public detail::DenseGrid<double> {
 public:
  ResampledVolume(GridDims dims, std::vector<double> values);
};

// Foreground probability per pixel, row-major, values in [0, 1].
class SilhouetteImage {
 public:
  SilhouetteImage(int height, int width, std::vector<double> values);
  SilhouetteImage(int height, int width, double fill = 0.0);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return values_.size(); }
  double operator()(int row, int col) const {
    return values_[static_cast<std::size_t>(row) * width_ + col];
  }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::size_t foreground_count(double level = 0.5) const;

  bool operator==(const SilhouetteImage&) const = default;

 private:
  int height_;
  int width_;
  std::vector<double> values_;
};

struct FlattenedSilhouette {
  SilhouetteImage image;
  std::vector<int> argmax;  // per pixel; smallest l' among ties
};

struct RenderGradients {
  GridDims dims;
  std::vector<double> d_loss_d_voxels;
  double d_loss_d_azimuth = 0.0;    // per radian
  double d_loss_d_elevation = 0.0;  // per radian
};

struct RenderOptions {
  bool voxel_gradients = true;
  bool angle_gradients = true;
  // > 0 replaces the hard max along depth with the mean-normalized
  // log-sum-exp tau * log(mean(exp(U / tau))), which stays within [0, 1].
  double smooth_max_temperature = 0.0;
};

struct RenderResult {
  double loss = 0.0;
  SilhouetteImage image;
  RenderGradients gradients;
};

// Gather form of trilinear resampling: every output cell is traced back to the
// object frame and interpolated with tent weights. Samples outside the grid
// read zeros.
ResampledVolume resample_volume(const VoxelGrid& grid, const CameraModel& cam, const Viewpoint& view);

FlattenedSilhouette flatten_silhouette(const ResampledVolume& volume);

SilhouetteImage render_silhouette(const VoxelGrid& grid, const CameraModel& cam,
                                  const Viewpoint& view);

// Sum over pixels of the squared difference.
double silhouette_loss(const SilhouetteImage& pred, const SilhouetteImage& target);

// Loss and its analytic gradients. With the hard max, the gradient flows only
// through the argmax depth sample of each pixel.
RenderResult render_with_gradients(const VoxelGrid& grid, const CameraModel& cam,
                                   const Viewpoint& view, const SilhouetteImage& target,
                                   const RenderOptions& options = {});

// Object-frame position of output cell (n', m', l').
Eigen::Vector3d sample_point_object(const CameraModel& cam, const Viewpoint& view, int row, int col,
                                    int depth_index);

}  // namespace voxsil
