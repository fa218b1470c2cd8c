// SPDX-License-Identifier: Apache-2.0
#include "voxsil/shape_ops.hpp"

#include <algorithm>
#include <stdexcept>

#include "voxsil/metrics.hpp"

namespace voxsil {

namespace {

void require_same_dims(const GridDims& a, const GridDims& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": dims mismatch " + to_string(a) + " vs " +
                                to_string(b));
  }
}

}  // namespace

VoxelGrid compose_shape(const VoxelGrid& mean, const ResidualGrid& residual) {
  require_same_dims(mean.dims(), residual.dims(), "compose_shape");
  std::vector<double> out(mean.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(mean[i] + residual[i], 0.0, 1.0);
  }
  return VoxelGrid(mean.dims(), std::move(out));
}

ResidualGrid residual_between(const VoxelGrid& shape, const VoxelGrid& mean) {
  require_same_dims(shape.dims(), mean.dims(), "residual_between");
  std::vector<double> out(shape.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = shape[i] - mean[i];
  return ResidualGrid(shape.dims(), std::move(out));
}

VoxelGrid compute_mean_shape(std::span<const BinaryVoxelGrid> grids) {
  if (grids.empty()) throw std::invalid_argument("compute_mean_shape: empty input list");
  const GridDims dims = grids.front().dims();
  std::vector<std::size_t> counts(dims.count(), 0);
  for (const auto& g : grids) {
    require_same_dims(dims, g.dims(), "compute_mean_shape");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += g[i];
  }
  // Integer counts keep the result independent of input order.
  std::vector<double> out(counts.size());
  const double n = static_cast<double>(grids.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(counts[i]) / n;
  return VoxelGrid(dims, std::move(out));
}

BinaryVoxelGrid binarize(const VoxelGrid& grid, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("binarize: threshold must lie in (0, 1), got " +
                                std::to_string(threshold));
  }
  std::vector<std::uint8_t> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = grid[i] >= threshold ? 1 : 0;
  return BinaryVoxelGrid(grid.dims(), std::move(out));
}

std::vector<double> threshold_candidates() {
  std::vector<double> out;
  for (int k = 1; k <= 19; ++k) out.push_back(k * 0.05);
  return out;
}

double select_threshold(std::span<const ThresholdPair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("select_threshold: empty pair list");
  double best_threshold = 0.0;
  double best_iou = -1.0;
  for (double t : threshold_candidates()) {
    double total = 0.0;
    for (const auto& p : pairs) total += voxel_iou(binarize(p.prediction, t), p.truth);
    const double mean_iou = total / static_cast<double>(pairs.size());
    if (mean_iou > best_iou) {
      best_iou = mean_iou;
      best_threshold = t;
    }
  }
  return best_threshold;
}

}  // namespace voxsil
