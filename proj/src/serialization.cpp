// SPDX-License-Identifier: Apache-2.0
#include "voxsil/serialization.hpp"

#include <fstream>
#include <set>

#include "voxsil/io.hpp"

namespace voxsil {

using nlohmann::json;

namespace {

void require_object(const json& j, const char* what) {
  if (!j.is_object()) throw FormatError(std::string(what) + ": expected a JSON object");
}

void reject_unknown(const json& j, const std::set<std::string>& known, const char* what) {
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw FormatError(std::string(what) + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("key '") + key + "': " + e.what());
  }
}

// Wraps library validation failures of decoded values as format errors.
template <typename F>
auto decode(const char* what, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json to_json(const Viewpoint& v) {
  return {{"azimuth_deg", v.azimuth_deg()}, {"elevation_deg", v.elevation_deg()}};
}

Viewpoint viewpoint_from_json(const json& j) {
  require_object(j, "viewpoint");
  reject_unknown(j, {"azimuth_deg", "elevation_deg"}, "viewpoint");
  if (!j.contains("azimuth_deg") || !j.contains("elevation_deg")) {
    throw FormatError("viewpoint: azimuth_deg and elevation_deg are required");
  }
  return decode("viewpoint", [&] {
    return Viewpoint(j.at("azimuth_deg").get<double>(), j.at("elevation_deg").get<double>());
  });
}

json to_json(const CameraModel& cam) {
  return {{"f", cam.intrinsics.focal},
          {"cx", cam.intrinsics.cx},
          {"cy", cam.intrinsics.cy},
          {"distance", cam.distance},
          {"image_height", cam.image_height},
          {"image_width", cam.image_width},
          {"depth_samples", cam.depth_samples},
          {"depth_half_range", cam.depth_half_range},
          {"elevation_axis", to_string(cam.elevation_axis)}};
}

CameraModel camera_from_json(const json& j) {
  require_object(j, "camera");
  reject_unknown(j,
                 {"f", "cx", "cy", "distance", "image_height", "image_width", "depth_samples",
                  "depth_half_range", "elevation_axis"},
                 "camera");
  CameraModel cam;
  cam.intrinsics.focal = get_or(j, "f", cam.intrinsics.focal);
  cam.intrinsics.cx = get_or(j, "cx", cam.intrinsics.cx);
  cam.intrinsics.cy = get_or(j, "cy", cam.intrinsics.cy);
  cam.distance = get_or(j, "distance", cam.distance);
  cam.image_height = get_or(j, "image_height", cam.image_height);
  cam.image_width = get_or(j, "image_width", cam.image_width);
  cam.depth_samples = get_or(j, "depth_samples", cam.depth_samples);
  cam.depth_half_range = get_or(j, "depth_half_range", cam.depth_half_range);
  const std::string axis = get_or<std::string>(j, "elevation_axis", to_string(cam.elevation_axis));
  return decode("camera", [&] {
    cam.elevation_axis = elevation_axis_from_string(axis);
    cam.validate();
    return cam;
  });
}

json to_json(const FitConfig& cfg) {
  return {{"max_iterations", cfg.max_iterations},
          {"step_size", cfg.step_size},
          {"pose_step_size", cfg.pose_step_size},
          {"residual_penalty", cfg.residual_penalty},
          {"pose_stage_iterations", cfg.pose_stage_iterations},
          {"pose_restarts", {cfg.azimuth_seeds, cfg.elevation_seeds}},
          {"convergence_tol", cfg.convergence_tol},
          {"rng_seed", cfg.rng_seed},
          {"joint_stage", cfg.joint_stage},
          {"smooth_max_temperature", cfg.smooth_max_temperature}};
}

FitConfig fit_config_from_json(const json& j) {
  require_object(j, "fit config");
  reject_unknown(j,
                 {"max_iterations", "step_size", "pose_step_size", "residual_penalty",
                  "pose_stage_iterations", "pose_restarts", "convergence_tol", "rng_seed",
                  "joint_stage", "smooth_max_temperature"},
                 "fit config");
  FitConfig cfg;
  cfg.max_iterations = get_or(j, "max_iterations", cfg.max_iterations);
  cfg.step_size = get_or(j, "step_size", cfg.step_size);
  cfg.pose_step_size = get_or(j, "pose_step_size", cfg.pose_step_size);
  cfg.residual_penalty = get_or(j, "residual_penalty", cfg.residual_penalty);
  cfg.pose_stage_iterations = get_or(j, "pose_stage_iterations", cfg.pose_stage_iterations);
  cfg.convergence_tol = get_or(j, "convergence_tol", cfg.convergence_tol);
  cfg.rng_seed = get_or(j, "rng_seed", cfg.rng_seed);
  cfg.joint_stage = get_or(j, "joint_stage", cfg.joint_stage);
  cfg.smooth_max_temperature = get_or(j, "smooth_max_temperature", cfg.smooth_max_temperature);
  if (j.contains("pose_restarts")) {
    const auto restarts = get_or<std::vector<int>>(j, "pose_restarts", {});
    if (restarts.size() != 2) throw FormatError("pose_restarts must be [azimuth, elevation]");
    cfg.azimuth_seeds = restarts[0];
    cfg.elevation_seeds = restarts[1];
  }
  return decode("fit config", [&] {
    cfg.validate();
    return cfg;
  });
}

json to_json(const SyntheticShapeSpec& spec) {
  return {{"primitive", to_string(spec.primitive)},
          {"parameters", spec.parameters},
          {"resolution", {spec.resolution.h, spec.resolution.w, spec.resolution.d}}};
}

SyntheticShapeSpec shape_spec_from_json(const json& j) {
  require_object(j, "shape spec");
  reject_unknown(j, {"primitive", "parameters", "resolution"}, "shape spec");
  if (!j.contains("primitive")) throw FormatError("shape spec: 'primitive' is required");
  return decode("shape spec", [&] {
    SyntheticShapeSpec spec;
    spec.primitive = primitive_from_string(j.at("primitive").get<std::string>());
    if (j.contains("parameters")) {
      spec.parameters = j.at("parameters").get<std::map<std::string, double>>();
    }
    if (j.contains("resolution")) {
      const auto r = j.at("resolution").get<std::vector<int>>();
      if (r.size() != 3) throw std::invalid_argument("resolution must be [h, w, d]");
      spec.resolution = {r[0], r[1], r[2]};
    }
    spec.validate();
    return spec;
  });
}

json to_json(const PoseErrorSummary& s) {
  return {{"median_error_deg", s.median_error_deg},
          {"acc_pi_6", s.acc_pi_6},
          {"per_instance_errors", s.per_instance_errors}};
}

json report_to_json(const FitReport& report) {
  json views = json::array();
  for (const auto& v : report.final_viewpoints) views.push_back(to_json(v));
  return {{"loss_trace", report.loss_trace},
          {"final_loss", report.loss_trace.empty() ? 0.0 : report.loss_trace.back()},
          {"converged", report.converged},
          {"iterations_used", report.iterations_used},
          {"final_viewpoints", views}};
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("'" + path.string() + "': " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

}  // namespace voxsil
