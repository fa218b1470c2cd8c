// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "voxsil/grid.hpp"

namespace voxsil {

// Mean shape plus residual, clamped per voxel to [0, 1].
VoxelGrid compose_shape(const VoxelGrid& mean, const ResidualGrid& residual);

// Residual that recomposes `shape` from `mean` (shape - mean).
ResidualGrid residual_between(const VoxelGrid& shape, const VoxelGrid& mean);

// Per-voxel fraction of the input grids that occupy each voxel.
VoxelGrid compute_mean_shape(std::span<const BinaryVoxelGrid> grids);

// 1 where occupancy >= threshold. Threshold must lie in (0, 1).
BinaryVoxelGrid binarize(const VoxelGrid& grid, double threshold);

// Candidate thresholds 0.05, 0.10, ..., 0.95.
std::vector<double> threshold_candidates();

struct ThresholdPair {
  const VoxelGrid& prediction;
  const BinaryVoxelGrid& truth;
};

// Candidate maximizing mean IoU over the pairs; ties go to the smaller value.
double select_threshold(std::span<const ThresholdPair> pairs);

}  // namespace voxsil
