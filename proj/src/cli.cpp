// SPDX-License-Identifier: Apache-2.0
#include "voxsil/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "voxsil/fitter.hpp"
#include "voxsil/io.hpp"
#include "voxsil/marching_cubes.hpp"
#include "voxsil/metrics.hpp"
#include "voxsil/serialization.hpp"
#include "voxsil/shape_ops.hpp"
#include "voxsil/synthetic.hpp"

namespace voxsil {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<std::uint64_t> seed;

  std::string spec, out, shape, view, camera, config, manifest, mean;
  std::vector<std::string> inputs, silhouettes, views, preds, truths;
  std::string out_shape, out_views, out_report, out_view;
  std::string mode = "paper-averaged";
  double threshold = 0.0;  // 0 selects from the data
  double isolevel = 0.5;
  double scale = 1.0;
};

CameraModel load_camera(const Options& o) {
  return o.camera.empty() ? CameraModel{} : camera_from_json(read_json(o.camera));
}

FitConfig load_config(const Options& o) {
  FitConfig cfg = o.config.empty() ? FitConfig{} : fit_config_from_json(read_json(o.config));
  if (o.seed) cfg.rng_seed = *o.seed;
  return cfg;
}

BinaryVoxelGrid require_binary(const VoxelGrid& g, const std::string& path) {
  std::vector<std::uint8_t> bits(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] != 0.0 && g[i] != 1.0) throw FormatError("'" + path + "' is not a binary voxel grid");
    bits[i] = g[i] == 1.0 ? 1 : 0;
  }
  return BinaryVoxelGrid(g.dims(), std::move(bits));
}

// Observations from --manifest (array of {"silhouette", "viewpoint"?}, paths
// relative to the manifest) or from paired --silhouette / --view flags.
std::vector<Observation> load_observations(const Options& o, bool need_views) {
  std::vector<Observation> obs;
  if (!o.manifest.empty()) {
    const json m = read_json(o.manifest);
    if (!m.is_array()) throw FormatError("manifest must be a JSON array");
    const fs::path base = fs::path(o.manifest).parent_path();
    for (const auto& entry : m) {
      if (!entry.is_object() || !entry.contains("silhouette") || !entry["silhouette"].is_string()) {
        throw FormatError("manifest entries need a 'silhouette' path");
      }
      Observation ob{read_silhouette(base / entry["silhouette"].get<std::string>()), std::nullopt};
      if (entry.contains("viewpoint")) ob.viewpoint = viewpoint_from_json(entry["viewpoint"]);
      obs.push_back(std::move(ob));
    }
  } else {
    if (need_views && o.views.size() != o.silhouettes.size()) {
      throw UsageError("each --silhouette needs a matching --view");
    }
    for (std::size_t i = 0; i < o.silhouettes.size(); ++i) {
      Observation ob{read_silhouette(o.silhouettes[i]), std::nullopt};
      if (i < o.views.size()) ob.viewpoint = viewpoint_from_json(read_json(o.views[i]));
      obs.push_back(std::move(ob));
    }
  }
  if (obs.empty()) throw UsageError("no observations given");
  return obs;
}

json viewpoints_json(const std::vector<Viewpoint>& views) {
  json arr = json::array();
  for (const auto& v : views) arr.push_back(to_json(v));
  return arr;
}

std::vector<Viewpoint> viewpoints_from_file(const std::string& path) {
  const json j = read_json(path);
  std::vector<Viewpoint> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(viewpoint_from_json(e));
  } else {
    out.push_back(viewpoint_from_json(j));
  }
  return out;
}

void write_fit_outputs(const Options& o, const FitReport& report, std::ostream& out) {
  if (!o.out_shape.empty()) write_voxels(o.out_shape, report.final_shape);
  if (!o.out_views.empty()) write_json(o.out_views, viewpoints_json(report.final_viewpoints));
  const json rep = report_to_json(report);
  if (!o.out_report.empty()) write_json(o.out_report, rep);
  json summary = rep;
  summary.erase("loss_trace");
  out << summary.dump(2) << '\n';
}

PointCloud load_cloud(const std::string& path, const Options& o) {
  if (fs::path(path).extension() == ".xyz") return read_pointcloud_xyz(path);
  const VoxelGrid g = read_voxels(path);
  return voxels_to_pointcloud(binarize(g, o.threshold > 0.0 ? o.threshold : 0.5), o.scale);
}

int run(const CLI::App& app, const Options& o, std::ostream& out) {
  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();

  if (name == "gen") {
    write_voxels(o.out, voxelize_primitive(shape_spec_from_json(read_json(o.spec))).to_occupancy());
  } else if (name == "mean") {
    std::vector<BinaryVoxelGrid> grids;
    for (const auto& p : o.inputs) grids.push_back(require_binary(read_voxels(p), p));
    write_voxels(o.out, compute_mean_shape(grids));
  } else if (name == "render") {
    const VoxelGrid grid = read_voxels(o.shape);
    const Viewpoint view = viewpoint_from_json(read_json(o.view));
    write_silhouette(o.out, render_silhouette(grid, load_camera(o), view));
  } else if (name == "fit-shape") {
    const auto obs = load_observations(o, true);
    write_fit_outputs(o, fit_shape(obs, read_voxels(o.mean), load_camera(o), load_config(o)), out);
  } else if (name == "fit-joint") {
    const auto obs = load_observations(o, false);
    write_fit_outputs(o, fit_joint(obs, read_voxels(o.mean), load_camera(o), load_config(o)), out);
  } else if (name == "fit-pose") {
    const Observation ob{read_silhouette(o.silhouettes.front()), std::nullopt};
    const PoseFit pf = fit_pose(ob, read_voxels(o.shape), load_camera(o), load_config(o));
    if (!o.out_view.empty()) write_json(o.out_view, to_json(pf.viewpoint));
    out << json{{"viewpoint", to_json(pf.viewpoint)}, {"loss", pf.loss}, {"converged", pf.converged}}
               .dump(2)
        << '\n';
  } else if (name == "eval-iou") {
    if (o.preds.size() != o.truths.size()) throw UsageError("each --pred needs a matching --truth");
    std::vector<VoxelGrid> preds;
    std::vector<BinaryVoxelGrid> truths;
    for (std::size_t i = 0; i < o.preds.size(); ++i) {
      preds.push_back(read_voxels(o.preds[i]));
      truths.push_back(require_binary(read_voxels(o.truths[i]), o.truths[i]));
    }
    std::vector<ThresholdPair> pairs;
    for (std::size_t i = 0; i < preds.size(); ++i) pairs.push_back({preds[i], truths[i]});
    const double t = o.threshold > 0.0 ? o.threshold : select_threshold(pairs);
    json ious = json::array();
    double total = 0.0;
    for (const auto& p : pairs) {
      const double iou = voxel_iou(binarize(p.prediction, t), p.truth);
      ious.push_back(iou);
      total += iou;
    }
    out << json{{"threshold", t}, {"mean_iou", total / static_cast<double>(pairs.size())},
                {"per_pair_iou", ious}}
               .dump(2)
        << '\n';
  } else if (name == "eval-pose") {
    const auto pred = viewpoints_from_file(o.preds.front());
    const auto truth = viewpoints_from_file(o.truths.front());
    if (pred.size() != truth.size()) throw UsageError("prediction and truth counts differ");
    std::vector<std::pair<Viewpoint, Viewpoint>> pairs;
    for (std::size_t i = 0; i < pred.size(); ++i) pairs.emplace_back(pred[i], truth[i]);
    out << to_json(summarize_pose_errors(pairs, load_camera(o).elevation_axis)).dump(2) << '\n';
  } else if (name == "eval-hausdorff") {
    const PointCloud a = load_cloud(o.preds.front(), o), b = load_cloud(o.truths.front(), o);
    const HausdorffMode mode = hausdorff_mode_from_string(o.mode);
    json result{{"mode", to_string(mode)}, {"hausdorff", symmetric_hausdorff(a, b, mode)}};
    const std::uint64_t seed = o.seed.value_or(0);
    if (a.points.size() >= 2) result["pred_density"] = cloud_density(a, seed);
    if (b.points.size() >= 2) result["truth_density"] = cloud_density(b, seed);
    out << result.dump(2) << '\n';
  } else if (name == "mesh") {
    write_mesh_obj(o.out, marching_cubes(read_voxels(o.shape), o.isolevel));
  }
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Voxel silhouette rendering, shape and pose fitting, and evaluation", "voxsil"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for every random choice");

  auto* gen = app.add_subcommand("gen", "Voxelize a synthetic shape spec (JSON) to .vox32");
  gen->add_option("--spec", o.spec, "Shape spec JSON")->required();
  gen->add_option("--out", o.out, "Output .vox32")->required();

  auto* mean = app.add_subcommand("mean", "Per-voxel mean of binary .vox32 grids");
  mean->add_option("inputs", o.inputs, "Input .vox32 files")->required();
  mean->add_option("--out", o.out, "Output .vox32")->required();

  auto* render = app.add_subcommand("render", "Render a silhouette PGM");
  render->add_option("--shape", o.shape, "Input .vox32")->required();
  render->add_option("--view", o.view, "Viewpoint JSON")->required();
  render->add_option("--camera", o.camera, "Camera JSON");
  render->add_option("--out", o.out, "Output .pgm")->required();

  const auto add_fit_io = [&](CLI::App* cmd, bool with_views) {
    cmd->add_option("--mean", o.mean, "Mean shape .vox32")->required();
    cmd->add_option("--manifest", o.manifest, "Observation manifest JSON");
    cmd->add_option("--silhouette", o.silhouettes, "Silhouette .pgm (repeatable)");
    if (with_views) cmd->add_option("--view", o.views, "Viewpoint JSON per silhouette");
    cmd->add_option("--camera", o.camera, "Camera JSON");
    cmd->add_option("--config", o.config, "Fit config JSON");
    cmd->add_option("--out-shape", o.out_shape, "Fitted shape .vox32");
    cmd->add_option("--out-views", o.out_views, "Fitted viewpoints JSON");
    cmd->add_option("--out-report", o.out_report, "Report JSON with the loss trace");
  };
  add_fit_io(app.add_subcommand("fit-shape", "Fit a shape to silhouettes at known viewpoints"), true);
  add_fit_io(app.add_subcommand("fit-joint", "Fit poses, then shape and poses jointly"), false);

  auto* fit_pose_cmd = app.add_subcommand("fit-pose", "Recover the viewpoint of one silhouette");
  fit_pose_cmd->add_option("--shape", o.shape, "Shape .vox32")->required();
  fit_pose_cmd->add_option("--silhouette", o.silhouettes, "Silhouette .pgm")->required()->expected(1);
  fit_pose_cmd->add_option("--camera", o.camera, "Camera JSON");
  fit_pose_cmd->add_option("--config", o.config, "Fit config JSON");
  fit_pose_cmd->add_option("--out-view", o.out_view, "Output viewpoint JSON");

  auto* eval_iou = app.add_subcommand("eval-iou", "Mean IoU of predictions against binary truths");
  eval_iou->add_option("--pred", o.preds, "Predicted .vox32 (repeatable)")->required();
  eval_iou->add_option("--truth", o.truths, "Binary truth .vox32 (repeatable)")->required();
  eval_iou->add_option("--threshold", o.threshold, "Fixed binarization threshold")
      ->check(CLI::Range(0.0, 1.0).description("in (0, 1)"));

  auto* eval_pose = app.add_subcommand("eval-pose", "Median angular error and Acc(pi/6)");
  eval_pose->add_option("--pred", o.preds, "Predicted viewpoint(s) JSON")->required()->expected(1);
  eval_pose->add_option("--truth", o.truths, "True viewpoint(s) JSON")->required()->expected(1);
  eval_pose->add_option("--camera", o.camera, "Camera JSON (elevation axis)");

  auto* eval_h = app.add_subcommand("eval-hausdorff", "Symmetric Hausdorff distance and density");
  eval_h->add_option("--pred", o.preds, "Prediction (.vox32 or .xyz)")->required()->expected(1);
  eval_h->add_option("--truth", o.truths, "Truth (.vox32 or .xyz)")->required()->expected(1);
  eval_h->add_option("--mode", o.mode, "paper-averaged or classic")
      ->check(CLI::IsMember({"paper-averaged", "paper", "classic"}));
  eval_h->add_option("--scale", o.scale, "Units per object cube for .vox32 input")
      ->check(CLI::PositiveNumber);
  eval_h->add_option("--threshold", o.threshold, "Binarization threshold for .vox32 input")
      ->check(CLI::Range(0.0, 1.0));

  auto* mesh = app.add_subcommand("mesh", "Marching-cubes mesh of a .vox32 to OBJ");
  mesh->add_option("--shape", o.shape, "Input .vox32")->required();
  mesh->add_option("--isolevel", o.isolevel, "Isolevel in (0, 1)")->check(CLI::Range(0.0, 1.0));
  mesh->add_option("--out", o.out, "Output .obj")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  if (app.count("--seed") > 0) o.seed = seed;

  try {
    return run(app, o, out);
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace voxsil
