// SPDX-License-Identifier: Apache-2.0
#include "voxsil/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace voxsil {

std::string to_string(HausdorffMode mode) {
  return mode == HausdorffMode::PaperAveraged ? "paper-averaged" : "classic";
}

HausdorffMode hausdorff_mode_from_string(const std::string& s) {
  if (s == "paper-averaged" || s == "paper") return HausdorffMode::PaperAveraged;
  if (s == "classic") return HausdorffMode::Classic;
  throw std::invalid_argument("unknown Hausdorff mode '" + s + "'");
}

double voxel_iou(const BinaryVoxelGrid& a, const BinaryVoxelGrid& b) {
  if (!(a.dims() == b.dims())) throw std::invalid_argument("voxel_iou: dims mismatch");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += a[i] & b[i];
    uni += a[i] | b[i];
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double angular_distance(const Viewpoint& a, const Viewpoint& b, ElevationAxis axis) {
  const Eigen::Matrix3d rel =
      rotation_from_viewpoint(a, axis) * rotation_from_viewpoint(b, axis).transpose();
  const double c = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c) * kRadToDeg;
}

PoseErrorSummary summarize_pose_errors(std::span<const std::pair<Viewpoint, Viewpoint>> pairs,
                                       ElevationAxis axis) {
  if (pairs.empty()) throw std::invalid_argument("summarize_pose_errors: empty list");
  PoseErrorSummary out;
  out.per_instance_errors.reserve(pairs.size());
  std::size_t accurate = 0;
  for (const auto& [pred, truth] : pairs) {
    const double err = angular_distance(pred, truth, axis);
    out.per_instance_errors.push_back(err);
    if (err < 30.0) ++accurate;
  }
  std::vector<double> sorted = out.per_instance_errors;
  const std::size_t mid = (sorted.size() - 1) / 2;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
  out.median_error_deg = sorted[mid];
  out.acc_pi_6 = static_cast<double>(accurate) / static_cast<double>(pairs.size());
  return out;
}

PointCloud voxels_to_pointcloud(const BinaryVoxelGrid& grid, double scale, std::string unit) {
  const GridDims& dims = grid.dims();
  PointCloud cloud;
  cloud.unit = std::move(unit);
  for (int n = 0; n < dims.h; ++n) {
    for (int m = 0; m < dims.w; ++m) {
      for (int l = 0; l < dims.d; ++l) {
        if (grid(n, m, l)) cloud.points.push_back(voxel_center(dims, n, m, l) * scale);
      }
    }
  }
  if (cloud.points.empty()) throw std::invalid_argument("voxels_to_pointcloud: empty grid");
  return cloud;
}

NearestNeighborIndex::NearestNeighborIndex(std::span<const Eigen::Vector3d> points) {
  std::vector<std::ptrdiff_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::ptrdiff_t i, std::ptrdiff_t j) { return points[i].x() < points[j].x(); });
  sorted_.reserve(points.size());
  for (auto i : order) sorted_.push_back(points[i]);
  original_index_ = std::move(order);
}

double NearestNeighborIndex::distance(const Eigen::Vector3d& query, std::ptrdiff_t exclude) const {
  double best_sq = std::numeric_limits<double>::infinity();
  const auto start = std::lower_bound(
      sorted_.begin(), sorted_.end(), query.x(),
      [](const Eigen::Vector3d& p, double x) { return p.x() < x; });
  const auto pivot = start - sorted_.begin();
  const auto consider = [&](std::ptrdiff_t i) {
    if (original_index_[i] == exclude) return;
    const Eigen::Vector3d& p = sorted_[i];
    const double dx = p.x() - query.x(), dy = p.y() - query.y(), dz = p.z() - query.z();
    best_sq = std::min(best_sq, dx * dx + dy * dy + dz * dz);
  };
  for (auto i = pivot; i < static_cast<std::ptrdiff_t>(sorted_.size()); ++i) {
    const double dx = sorted_[i].x() - query.x();
    if (dx * dx > best_sq) break;
    consider(i);
  }
  for (auto i = pivot - 1; i >= 0; --i) {
    const double dx = query.x() - sorted_[i].x();
    if (dx * dx > best_sq) break;
    consider(i);
  }
  return std::sqrt(best_sq);
}

double cloud_density(const PointCloud& cloud, std::uint64_t rng_seed) {
  const std::size_t n = cloud.points.size();
  if (n < 2) throw std::invalid_argument("cloud_density: need at least two points");
  const std::size_t samples = (n + 9) / 10;

  // Partial Fisher-Yates keeps the sample reproducible for a given seed.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(rng_seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(idx[i], idx[j]);
  }

  const NearestNeighborIndex index(cloud.points);
  double total = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    total += index.distance(cloud.points[idx[i]], static_cast<std::ptrdiff_t>(idx[i]));
  }
  return total / static_cast<double>(samples);
}

namespace {

double directed(const PointCloud& from, const NearestNeighborIndex& to, HausdorffMode mode) {
  double acc = 0.0;
  for (const auto& p : from.points) {
    const double d = to.distance(p);
    acc = mode == HausdorffMode::Classic ? std::max(acc, d) : acc + d;
  }
  return mode == HausdorffMode::Classic ? acc : acc / static_cast<double>(from.points.size());
}

}  // namespace

double symmetric_hausdorff(const PointCloud& a, const PointCloud& b, HausdorffMode mode) {
  if (a.points.empty() || b.points.empty()) {
    throw std::invalid_argument("symmetric_hausdorff: empty point cloud");
  }
  const NearestNeighborIndex index_a(a.points), index_b(b.points);
  return (directed(a, index_b, mode) + directed(b, index_a, mode)) / 2.0;
}

}  // namespace voxsil
