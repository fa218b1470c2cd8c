// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include <json.hpp>

#include "voxsil/camera.hpp"
#include "voxsil/fitter.hpp"
#include "voxsil/metrics.hpp"
#include "voxsil/synthetic.hpp"

namespace voxsil {

// JSON mappings. Keys are lower_snake_case; missing keys in camera, fit
// config and shape spec objects fall back to defaults, unknown keys are
// rejected. Malformed input raises FormatError.

nlohmann::json to_json(const Viewpoint& v);
Viewpoint viewpoint_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CameraModel& cam);
CameraModel camera_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FitConfig& cfg);
FitConfig fit_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SyntheticShapeSpec& spec);
SyntheticShapeSpec shape_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PoseErrorSummary& s);

// Trace and viewpoints; the shape itself goes to a .vox32 file.
nlohmann::json report_to_json(const FitReport& report);

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace voxsil
