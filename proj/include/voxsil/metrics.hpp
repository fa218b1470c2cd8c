// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "voxsil/camera.hpp"
#include "voxsil/grid.hpp"

namespace voxsil {

struct PointCloud {
  std::vector<Eigen::Vector3d> points;
  std::string unit = "object";
};

struct PoseErrorSummary {
  double median_error_deg = 0.0;
  double acc_pi_6 = 0.0;  // fraction of errors below 30 degrees
  std::vector<double> per_instance_errors;
};

enum class HausdorffMode {
  PaperAveraged,  // mean of closest-point distances, averaged both ways
  Classic,        // max of closest-point distances, averaged both ways
};

std::string to_string(HausdorffMode mode);
HausdorffMode hausdorff_mode_from_string(const std::string& s);

// |a and b| / |a or b|; two empty grids count as identical (1).
double voxel_iou(const BinaryVoxelGrid& a, const BinaryVoxelGrid& b);

// Geodesic angle between the two camera rotations, in degrees.
double angular_distance(const Viewpoint& a, const Viewpoint& b,
                        ElevationAxis axis = ElevationAxis::Paper);

// Median uses the lower middle element for even counts.
PoseErrorSummary summarize_pose_errors(std::span<const std::pair<Viewpoint, Viewpoint>> pairs,
                                       ElevationAxis axis = ElevationAxis::Paper);

// One point per occupied voxel center, scaled by `scale` units per cube edge.
PointCloud voxels_to_pointcloud(const BinaryVoxelGrid& grid, double scale = 1.0,
                                std::string unit = "object");

// Mean nearest-neighbor distance over a seeded sample of ceil(N / 10) points.
double cloud_density(const PointCloud& cloud, std::uint64_t rng_seed);

double symmetric_hausdorff(const PointCloud& a, const PointCloud& b,
                           HausdorffMode mode = HausdorffMode::PaperAveraged);

// Exact nearest-neighbor queries by a sweep over points sorted along x.
class NearestNeighborIndex {
 public:
  explicit NearestNeighborIndex(std::span<const Eigen::Vector3d> points);

  // Distance from `query` to the closest indexed point, skipping the point
  // with index `exclude` (pass -1 to consider all).
  double distance(const Eigen::Vector3d& query, std::ptrdiff_t exclude = -1) const;

 private:
  std::vector<Eigen::Vector3d> sorted_;
  std::vector<std::ptrdiff_t> original_index_;
};

}  // namespace voxsil
