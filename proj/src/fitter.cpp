// SPDX-License-Identifier: Apache-2.0
#include "voxsil/fitter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "voxsil/descent.hpp"

namespace voxsil {

namespace {

constexpr double kLogitClamp = 1e-3;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxElevationRad = kMaxElevationDeg * kDegToRad;

double logistic(double w) { return 1.0 / (1.0 + std::exp(-w)); }

double logit(double v) {
  const double c = std::clamp(v, kLogitClamp, 1.0 - kLogitClamp);
  return std::log(c / (1.0 - c));
}

// Viewpoint from optimizer angles; assumes elevation was already projected.
Viewpoint viewpoint_from_radians(double azimuth_rad, double elevation_rad) {
  return Viewpoint(azimuth_rad * kRadToDeg,
                   std::clamp(elevation_rad * kRadToDeg, 0.0, kMaxElevationDeg));
}

void project_pose(double& azimuth, double& elevation) {
  azimuth = std::fmod(azimuth, kTwoPi);
  if (azimuth < 0.0) azimuth += kTwoPi;
  elevation = std::clamp(elevation, 0.0, kMaxElevationRad);
}

void check_observation_dims(std::span<const Observation> observations, const CameraModel& cam) {
  for (const auto& obs : observations) {
    if (obs.silhouette.height() != cam.image_height || obs.silhouette.width() != cam.image_width) {
      throw std::invalid_argument("observation silhouette dims do not match the camera");
    }
  }
}

VoxelGrid shape_from_latent(const GridDims& dims, std::span<const double> latent) {
  std::vector<double> v(dims.count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = logistic(latent[i]);
  return VoxelGrid(dims, std::move(v));
}

// Adds residual_penalty * |V - mean|_1 and maps dL/dV to dL/dw in place.
double apply_prior_and_chain(const VoxelGrid& shape, const VoxelGrid& mean, double penalty,
                             std::span<double> grad) {
  double prior = 0.0;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const double diff = shape[i] - mean[i];
    double g = grad[i];
    if (penalty > 0.0) {
      prior += penalty * std::abs(diff);
      g += penalty * static_cast<double>((diff > 0.0) - (diff < 0.0));
    }
    grad[i] = g * shape[i] * (1.0 - shape[i]);
  }
  return prior;
}

bool has_foreground(const SilhouetteImage& s) {
  return std::any_of(s.values().begin(), s.values().end(), [](double v) { return v > 0.0; });
}

DescentOptions descent_options(int iterations, const FitConfig& cfg) {
  DescentOptions opt;
  opt.max_iterations = iterations;
  opt.convergence_tol = cfg.convergence_tol;
  return opt;
}

}  // namespace

void FitConfig::validate() const {
  if (max_iterations < 1 || pose_stage_iterations < 1 || azimuth_seeds < 1 || elevation_seeds < 1) {
    throw std::invalid_argument("fit config counts must be >= 1");
  }
  if (!(step_size > 0.0) || !(pose_step_size > 0.0)) {
    throw std::invalid_argument("fit config step sizes must be positive");
  }
  if (!(residual_penalty >= 0.0)) throw std::invalid_argument("residual_penalty must be >= 0");
  if (!(convergence_tol >= 0.0)) throw std::invalid_argument("convergence_tol must be >= 0");
  if (!(smooth_max_temperature >= 0.0)) {
    throw std::invalid_argument("smooth_max_temperature must be >= 0");
  }
}

std::vector<Viewpoint> pose_seeds(const FitConfig& cfg) {
  std::vector<Viewpoint> seeds;
  for (int j = 0; j < cfg.elevation_seeds; ++j) {
    const double el = cfg.elevation_seeds == 1
                          ? kMaxElevationDeg / 2.0
                          : kMaxElevationDeg * j / (cfg.elevation_seeds - 1);
    for (int i = 0; i < cfg.azimuth_seeds; ++i) {
      seeds.emplace_back(360.0 * i / cfg.azimuth_seeds, el);
    }
  }
  return seeds;
}

FitReport fit_shape(std::span<const Observation> observations, const VoxelGrid& mean,
                    const CameraModel& cam, const FitConfig& cfg) {
  cfg.validate();
  cam.validate();
  if (observations.empty()) throw std::invalid_argument("fit_shape: no observations");
  for (const auto& obs : observations) {
    if (!obs.viewpoint) throw std::invalid_argument("fit_shape: observation without viewpoint");
  }
  check_observation_dims(observations, cam);

  const GridDims dims = mean.dims();
  RenderOptions render_opt;
  render_opt.angle_gradients = false;
  render_opt.smooth_max_temperature = cfg.smooth_max_temperature;

  const Objective objective = [&](std::span<const double> latent) {
    const VoxelGrid shape = shape_from_latent(dims, latent);
    Evaluation e;
    e.gradient.assign(dims.count(), 0.0);
    for (const auto& obs : observations) {
      const RenderResult r = render_with_gradients(shape, cam, *obs.viewpoint, obs.silhouette, render_opt);
      e.loss += r.loss;
      for (std::size_t i = 0; i < e.gradient.size(); ++i) {
        e.gradient[i] += r.gradients.d_loss_d_voxels[i];
      }
    }
    e.loss += apply_prior_and_chain(shape, mean, cfg.residual_penalty, e.gradient);
    return e;
  };

  std::vector<double> latent(dims.count());
  for (std::size_t i = 0; i < latent.size(); ++i) latent[i] = logit(mean[i]);
  const std::vector<double> steps(latent.size(), cfg.step_size);

  DescentResult res =
      adaptive_descent(std::move(latent), steps, objective, descent_options(cfg.max_iterations, cfg));

  FitReport report{shape_from_latent(dims, res.parameters), {}, std::move(res.loss_trace),
                   res.converged, res.iterations};
  for (const auto& obs : observations) report.final_viewpoints.push_back(*obs.viewpoint);
  return report;
}

PoseFit fit_pose(const Observation& observation, const VoxelGrid& shape, const CameraModel& cam,
                 const FitConfig& cfg) {
  cfg.validate();
  cam.validate();
  check_observation_dims(std::span(&observation, 1), cam);

  RenderOptions render_opt;
  render_opt.voxel_gradients = false;
  render_opt.smooth_max_temperature = cfg.smooth_max_temperature;

  const Objective objective = [&](std::span<const double> angles) {
    const RenderResult r = render_with_gradients(
        shape, cam, viewpoint_from_radians(angles[0], angles[1]), observation.silhouette, render_opt);
    return Evaluation{r.loss, {r.gradients.d_loss_d_azimuth, r.gradients.d_loss_d_elevation}};
  };
  const Projection project = [](std::span<double> angles) { project_pose(angles[0], angles[1]); };
  const std::vector<double> steps(2, cfg.pose_step_size);
  const DescentOptions options = descent_options(cfg.pose_stage_iterations, cfg);

  PoseFit out;
  std::size_t best = 0;
  for (const Viewpoint& seed : pose_seeds(cfg)) {
    DescentResult res = adaptive_descent({seed.azimuth_rad(), seed.elevation_rad()}, steps,
                                         objective, options, project);
    out.seeds.push_back({seed, viewpoint_from_radians(res.parameters[0], res.parameters[1]),
                         res.final.loss, res.iterations, res.converged});
    if (res.final.loss < out.seeds[best].loss) best = out.seeds.size() - 1;
  }

  const PoseSeedResult& winner = out.seeds[best];
  out.viewpoint = winner.refined;
  out.loss = winner.loss;
  out.converged = winner.converged && has_foreground(observation.silhouette);
  return out;
}

FitReport fit_joint(std::span<const Observation> observations, const VoxelGrid& mean,
                    const CameraModel& cam, const FitConfig& cfg) {
  cfg.validate();
  cam.validate();
  if (observations.empty()) throw std::invalid_argument("fit_joint: no observations");
  check_observation_dims(observations, cam);

  // Stage 1: pose only, shape frozen at the mean.
  std::vector<Viewpoint> poses;
  bool posed = true;
  for (const auto& obs : observations) {
    const PoseFit pf = fit_pose(obs, mean, cam, cfg);
    poses.push_back(pf.viewpoint);
    posed = posed && pf.converged;
  }

  const GridDims dims = mean.dims();
  const std::size_t voxel_count = dims.count();
  const std::size_t views = observations.size();

  RenderOptions render_opt;
  render_opt.smooth_max_temperature = cfg.smooth_max_temperature;

  // Parameters: latent logits followed by (azimuth, elevation) per view.
  const Objective objective = [&](std::span<const double> params) {
    const VoxelGrid shape = shape_from_latent(dims, params.first(voxel_count));
    Evaluation e;
    e.gradient.assign(params.size(), 0.0);
    for (std::size_t k = 0; k < views; ++k) {
      const double az = params[voxel_count + 2 * k];
      const double el = params[voxel_count + 2 * k + 1];
      const RenderResult r = render_with_gradients(shape, cam, viewpoint_from_radians(az, el),
                                                   observations[k].silhouette, render_opt);
      e.loss += r.loss;
      for (std::size_t i = 0; i < voxel_count; ++i) e.gradient[i] += r.gradients.d_loss_d_voxels[i];
      e.gradient[voxel_count + 2 * k] = r.gradients.d_loss_d_azimuth;
      e.gradient[voxel_count + 2 * k + 1] = r.gradients.d_loss_d_elevation;
    }
    e.loss += apply_prior_and_chain(shape, mean, cfg.residual_penalty,
                                    std::span(e.gradient).first(voxel_count));
    return e;
  };
  const Projection project = [&](std::span<double> params) {
    for (std::size_t k = 0; k < views; ++k) {
      project_pose(params[voxel_count + 2 * k], params[voxel_count + 2 * k + 1]);
    }
  };

  std::vector<double> params(voxel_count + 2 * views);
  for (std::size_t i = 0; i < voxel_count; ++i) params[i] = logit(mean[i]);
  for (std::size_t k = 0; k < views; ++k) {
    params[voxel_count + 2 * k] = poses[k].azimuth_rad();
    params[voxel_count + 2 * k + 1] = poses[k].elevation_rad();
  }
  std::vector<double> steps(params.size(), cfg.step_size);
  std::fill(steps.begin() + static_cast<std::ptrdiff_t>(voxel_count), steps.end(),
            cfg.pose_step_size);

  DescentResult res = cfg.joint_stage
                          ? adaptive_descent(std::move(params), steps, objective,
                                             descent_options(cfg.max_iterations, cfg), project)
                          : DescentResult{params, objective(params), {}, 0, posed};
  if (res.loss_trace.empty()) res.loss_trace.push_back(res.final.loss);

  FitReport report{shape_from_latent(dims, std::span<const double>(res.parameters).first(voxel_count)),
                   {}, std::move(res.loss_trace), res.converged, res.iterations};
  for (std::size_t k = 0; k < views; ++k) {
    report.final_viewpoints.push_back(viewpoint_from_radians(res.parameters[voxel_count + 2 * k],
                                                             res.parameters[voxel_count + 2 * k + 1]));
  }
  return report;
}

}  // namespace voxsil
