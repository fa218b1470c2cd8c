// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "voxsil/camera.hpp"
#include "voxsil/grid.hpp"
#include "voxsil/projector.hpp"

namespace voxsil {

struct Observation {
  SilhouetteImage silhouette;
  std::optional<Viewpoint> viewpoint;
};

struct FitConfig {
  int max_iterations = 500;         // shape fitting and the joint stage
  double step_size = 0.5;           // latent (logit) units per step
  double pose_step_size = 0.05;     // radians per step
  double residual_penalty = 0.0;    // weight on |V - mean|_1
  int pose_stage_iterations = 200;  // refinement steps per pose seed
  int azimuth_seeds = 24;
  int elevation_seeds = 3;
  double convergence_tol = 1e-7;    // relative loss decrease that ends a fit
  std::uint64_t rng_seed = 0;
  bool joint_stage = true;          // fit_joint: run the joint refinement after posing
  double smooth_max_temperature = 0.0;

  // Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

struct FitReport {
  VoxelGrid final_shape;
  std::vector<Viewpoint> final_viewpoints;
  std::vector<double> loss_trace;
  bool converged = false;
  int iterations_used = 0;
};

struct PoseSeedResult {
  Viewpoint seed;
  Viewpoint refined;
  double loss = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct PoseFit {
  Viewpoint viewpoint;
  double loss = 0.0;
  bool converged = false;
  std::vector<PoseSeedResult> seeds;
};

// Latent-logit shape optimization against silhouettes at known viewpoints.
FitReport fit_shape(std::span<const Observation> observations, const VoxelGrid& mean,
                    const CameraModel& cam, const FitConfig& cfg);

// Multi-start refinement of azimuth and elevation for a fixed shape.
PoseFit fit_pose(const Observation& observation, const VoxelGrid& shape, const CameraModel& cam,
                 const FitConfig& cfg);

// Per-observation pose fitting against the frozen mean, then joint refinement
// of shape and all viewpoints. Viewpoints carried by the observations are ignored.
FitReport fit_joint(std::span<const Observation> observations, const VoxelGrid& mean,
                    const CameraModel& cam, const FitConfig& cfg);

// Seed grid used by fit_pose: azimuth_seeds evenly over [0, 360) times
// elevation_seeds evenly over [0, 40] (20 when only one).
std::vector<Viewpoint> pose_seeds(const FitConfig& cfg);

}  // namespace voxsil
