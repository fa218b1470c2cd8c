// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Geometry>

#include "gradient_check.hpp"
#include "test_support.hpp"
#include "voxsil/fitter.hpp"
#include "voxsil/io.hpp"
#include "voxsil/marching_cubes.hpp"
#include "voxsil/metrics.hpp"
#include "voxsil/shape_ops.hpp"

using namespace voxsil;
using namespace voxsil::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double azimuth_error(double a, double b) { return std::abs(std::remainder(a - b, 360.0)); }

Outcome gradient_correctness() {
  const auto t0 = Clock::now();
  const GridDims dims{16, 16, 16};
  const CameraModel cam = CameraModel::square(32, 32);
  std::mt19937_64 rng(1001);
  int checked = 0, attempts = 0, failures = 0;
  double worst_voxel = 0.0, worst_angle = 0.0;
  while (checked < 100 && attempts < 400) {
    ++attempts;
    const GradientTriple t = random_triple(dims, cam, rng);
    const GradientCheck c = check_gradients(t.grid, cam, t.view, t.target, rng);
    if (c.angle_degenerate || c.voxels_probed == 0) continue;
    ++checked;
    worst_voxel = std::max(worst_voxel, c.voxel_rel_error);
    worst_angle = std::max({worst_angle, c.azimuth_rel_error, c.elevation_rel_error});
    if (c.voxel_rel_error >= 1e-4 || c.azimuth_rel_error >= 1e-3 || c.elevation_rel_error >= 1e-3) {
      ++failures;
    }
  }
  const double secs = seconds_since(t0);
  return {checked >= 100 && failures == 0 && secs < 120.0,
          fmt("%d non-degenerate triples (%d drawn), %d failures, worst rel err voxel %.2e angle "
              "%.2e, %.1fs",
              checked, attempts, failures, worst_voxel, worst_angle, secs)};
}

Outcome renderer_invariants() {
  std::mt19937_64 rng(1002);
  const GridDims dims{16, 16, 16};
  const CameraModel cam = CameraModel::square(32, 32);
  bool ok = true;
  std::string notes;

  double empty_max = 0.0;
  for (int i = 0; i < 5; ++i) {
    const SilhouetteImage s = render_silhouette(VoxelGrid(dims), cam, random_viewpoint(rng));
    for (double v : s.values()) empty_max = std::max(empty_max, v);
  }
  ok = ok && empty_max == 0.0;

  double worst_drop = 0.0;
  for (int i = 0; i < 50; ++i) {
    const VoxelGrid g = random_grid(dims, rng, 0.0, 0.9);
    const Viewpoint v = random_viewpoint(rng);
    std::vector<double> up(g.values().begin(), g.values().end());
    up[rng() % up.size()] += 0.1;
    const SilhouetteImage a = render_silhouette(g, cam, v);
    const SilhouetteImage b = render_silhouette(VoxelGrid(dims, up), cam, v);
    for (std::size_t k = 0; k < a.size(); ++k) worst_drop = std::max(worst_drop, a[k] - b[k]);
  }
  ok = ok && worst_drop <= 0.0;

  double period_diff = 0.0;
  for (int i = 0; i < 10; ++i) {
    const VoxelGrid g = random_grid(dims, rng);
    const Viewpoint v = random_viewpoint(rng);
    const SilhouetteImage a = render_silhouette(g, cam, v);
    const SilhouetteImage b = render_silhouette(g, cam, Viewpoint(v.azimuth_deg() + 360.0, v.elevation_deg()));
    const SilhouetteImage c = render_silhouette(g, cam, Viewpoint(v.azimuth_deg() - 720.0, v.elevation_deg()));
    for (std::size_t k = 0; k < a.size(); ++k) {
      period_diff = std::max({period_diff, std::abs(a[k] - b[k]), std::abs(a[k] - c[k])});
    }
  }
  ok = ok && period_diff <= 1e-10;

  double oracle_diff = 0.0;
  const VoxelGrid g = random_grid(dims, rng);
  for (int batch = 0; batch < 10; ++batch) {
    const Viewpoint v = random_viewpoint(rng);
    const ResampledVolume vol = resample_volume(g, cam, v);
    for (int i = 0; i < 100; ++i) {
      const int r = int(rng() % 32), c = int(rng() % 32), l = int(rng() % 32);
      const double expect = trilinear_oracle(g, lattice_oracle(dims, sample_point_oracle(cam, v, r, c, l)));
      oracle_diff = std::max(oracle_diff, std::abs(vol(r, c, l) - expect));
    }
  }
  ok = ok && oracle_diff <= 1e-10;

  return {ok, fmt("empty max %.1e, worst monotonicity drop %.1e, periodicity diff %.1e, "
                  "trilinear oracle diff over 1000 samples %.1e",
                  empty_max, worst_drop, period_diff, oracle_diff)};
}

Outcome visual_hull_recovery() {
  const GridDims dims{32, 32, 32};
  const BinaryVoxelGrid truth = voxelize_primitive({Primitive::Sphere, {{"radius", 0.35}}, dims});
  const CameraModel cam;
  std::vector<Observation> obs;
  for (int i = 0; i < 24; ++i) {
    const Viewpoint v(15.0 * i, 20.0);
    obs.push_back({render_silhouette(truth.to_occupancy(), cam, v), v});
  }
  const auto t0 = Clock::now();
  const FitReport r = fit_shape(obs, VoxelGrid(dims, 1.0), cam, FitConfig{});
  const double secs = seconds_since(t0);
  const double iou = voxel_iou(binarize(r.final_shape, 0.5), truth);
  return {iou >= 0.7 && r.iterations_used <= 500 && secs < 300.0,
          fmt("IoU %.4f after %d iterations, loss %.1f -> %.1f, %.1fs", iou, r.iterations_used,
              r.loss_trace.front(), r.loss_trace.back(), secs)};
}

Outcome pose_recovery() {
  const GridDims dims{32, 32, 32};
  const VoxelGrid shape = asymmetric_composite(dims).to_occupancy();
  const CameraModel cam = CameraModel::square(32, 32);
  std::mt19937_64 rng(1004);
  int within = 0;
  std::vector<std::pair<Viewpoint, Viewpoint>> pairs;
  const auto t0 = Clock::now();
  for (int i = 0; i < 50; ++i) {
    const Viewpoint truth = random_viewpoint(rng);
    const PoseFit pf = fit_pose({render_silhouette(shape, cam, truth), std::nullopt}, shape, cam, FitConfig{});
    within += azimuth_error(pf.viewpoint.azimuth_deg(), truth.azimuth_deg()) < 5.0 &&
              std::abs(pf.viewpoint.elevation_deg() - truth.elevation_deg()) < 5.0;
    pairs.emplace_back(pf.viewpoint, truth);
  }
  const PoseErrorSummary s = summarize_pose_errors(pairs);
  return {within >= 45 && s.median_error_deg < 5.0,
          fmt("%d/50 within 5 deg, median angular error %.3g deg, acc_pi_6 %.2f, %.1fs", within,
              s.median_error_deg, s.acc_pi_6, seconds_since(t0))};
}

VoxelGrid chair_mean(const GridDims& dims, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> seat(0.5, 0.7), leg(0.3, 0.4), back(0.3, 0.45);
  std::vector<BinaryVoxelGrid> chairs;
  for (int i = 0; i < 10; ++i) {
    const double w = seat(rng);
    chairs.push_back(voxelize_primitive({Primitive::Chair,
                                         {{"seat_width", w},
                                          {"seat_depth", seat(rng)},
                                          {"leg_height", leg(rng)},
                                          {"back_height", back(rng)},
                                          {"cx", 0.1 * (0.7 - w)}},
                                         dims}));
  }
  return compute_mean_shape(chairs);
}

Outcome staged_schedule() {
  const GridDims dims{32, 32, 32};
  std::mt19937_64 shape_rng(1005);
  const VoxelGrid mean = chair_mean(dims, shape_rng);
  const CameraModel cam = CameraModel::square(32, 32);
  FitConfig cfg;
  cfg.max_iterations = 40;

  std::vector<double> az_errors;
  int increases = 0;
  double worst_ratio = 0.0;
  const auto t0 = Clock::now();
  for (int run = 0; run < 20; ++run) {
    std::mt19937_64 rng(2000 + run);
    std::vector<Observation> obs;
    std::vector<Viewpoint> truth;
    for (int k = 0; k < 2; ++k) {
      truth.push_back(random_viewpoint(rng));
      obs.push_back({render_silhouette(mean, cam, truth.back()), std::nullopt});
    }
    cfg.rng_seed = 2000 + run;
    cfg.joint_stage = false;
    const FitReport staged = fit_joint(obs, mean, cam, cfg);
    for (int k = 0; k < 2; ++k) {
      az_errors.push_back(azimuth_error(staged.final_viewpoints[k].azimuth_deg(), truth[k].azimuth_deg()));
    }
    cfg.joint_stage = true;
    const FitReport joint = fit_joint(obs, mean, cam, cfg);
    const double before = staged.loss_trace.back(), after = joint.loss_trace.back();
    increases += after > before;
    if (before > 0.0) worst_ratio = std::max(worst_ratio, after / before);
  }
  std::sort(az_errors.begin(), az_errors.end());
  const double median = az_errors[(az_errors.size() - 1) / 2];
  return {median < 10.0 && increases == 0,
          fmt("stage-1 median azimuth error %.3g deg over %zu views, stage 2 raised the loss in "
              "%d/20 runs (worst final/initial %.3f), %.1fs",
              median, az_errors.size(), increases, worst_ratio, seconds_since(t0))};
}

Outcome metric_oracles() {
  std::mt19937_64 rng(1006);
  double worst = 0.0;
  const auto brute_nn = [](const std::vector<Eigen::Vector3d>& pts, const Eigen::Vector3d& q,
                           std::ptrdiff_t skip) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (static_cast<std::ptrdiff_t>(i) != skip) best = std::min(best, (pts[i] - q).norm());
    }
    return best;
  };
  const auto cloud = [&](int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PointCloud c;
    for (int i = 0; i < n; ++i) c.points.emplace_back(u(rng), u(rng), u(rng));
    return c;
  };

  for (int i = 0; i < 100; ++i) {
    const GridDims d{6, 7, 8};
    const auto a = random_binary(d, rng, 0.3), b = random_binary(d, rng, 0.3);
    std::size_t inter = 0, uni = 0;
    for (std::size_t k = 0; k < d.count(); ++k) {
      inter += a[k] && b[k];
      uni += a[k] || b[k];
    }
    worst = std::max(worst, std::abs(voxel_iou(a, b) - (uni ? double(inter) / uni : 1.0)));

    const Viewpoint va = random_viewpoint(rng), vb = random_viewpoint(rng);
    const Eigen::Matrix3d rel = rotation_oracle(va.azimuth_deg(), va.elevation_deg()) *
                                rotation_oracle(vb.azimuth_deg(), vb.elevation_deg()).transpose();
    worst = std::max(worst, std::abs(angular_distance(va, vb) - Eigen::AngleAxisd(rel).angle() * 180.0 / M_PI));

    const PointCloud pa = cloud(2 + int(rng() % 60)), pb = cloud(2 + int(rng() % 60));
    for (bool classic : {false, true}) {
      const auto directed = [&](const PointCloud& x, const PointCloud& y) {
        double acc = 0.0;
        for (const auto& p : x.points) {
          const double dist = brute_nn(y.points, p, -1);
          acc = classic ? std::max(acc, dist) : acc + dist;
        }
        return classic ? acc : acc / x.points.size();
      };
      const double expect = 0.5 * (directed(pa, pb) + directed(pb, pa));
      const double got = symmetric_hausdorff(pa, pb, classic ? HausdorffMode::Classic : HausdorffMode::PaperAveraged);
      worst = std::max(worst, std::abs(got - expect));
    }

    const std::uint64_t seed = rng();
    const std::size_t n = pa.points.size(), k = (n + 9) / 10;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 pick(seed);
    for (std::size_t j = 0; j < k; ++j) std::swap(idx[j], idx[j + pick() % (n - j)]);
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      sum += brute_nn(pa.points, pa.points[idx[j]], static_cast<std::ptrdiff_t>(idx[j]));
    }
    worst = std::max(worst, std::abs(cloud_density(pa, seed) - sum / k));
  }
  return {worst <= 1e-12, fmt("worst deviation from brute-force oracles over 100 instances %.2e", worst)};
}

Outcome mean_shape_behavior() {
  const GridDims dims{32, 32, 32};
  std::mt19937_64 rng(1007);
  std::uniform_int_distribution<int> lo(2, 12), size(6, 18);
  std::vector<BinaryVoxelGrid> boxes;
  std::vector<std::array<int, 6>> extents;
  for (int i = 0; i < 50; ++i) {
    std::array<int, 6> e;
    for (int k = 0; k < 3; ++k) {
      e[k] = lo(rng);
      e[k + 3] = std::min(32, e[k] + size(rng));
    }
    extents.push_back(e);
    boxes.push_back(box_grid(dims, {e[0], e[1], e[2]}, {e[3], e[4], e[5]}));
  }
  const VoxelGrid mean = compute_mean_shape(boxes);
  std::size_t mismatches = 0;
  for (int n = 0; n < 32; ++n)
    for (int m = 0; m < 32; ++m)
      for (int l = 0; l < 32; ++l) {
        int count = 0;
        for (const auto& e : extents) {
          count += n >= e[0] && n < e[3] && m >= e[1] && m < e[4] && l >= e[2] && l < e[5];
        }
        mismatches += mean(n, m, l) != count / 50.0;
      }

  const CameraModel cam;
  const VoxelGrid sphere = voxelize_primitive({Primitive::Sphere, {{"radius", 0.3}}, dims}).to_occupancy();
  std::vector<Observation> obs;
  for (int i = 0; i < 8; ++i) {
    const Viewpoint v(45.0 * i, 20.0);
    obs.push_back({render_silhouette(sphere, cam, v), v});
  }
  FitConfig cfg;
  cfg.residual_penalty = 1e3;
  const auto t0 = Clock::now();
  const FitReport r = fit_shape(obs, mean, cam, cfg);
  const double iou = voxel_iou(binarize(r.final_shape, 0.5), binarize(mean, 0.5));
  return {mismatches == 0 && iou >= 0.99,
          fmt("%zu voxels differ from brute-force coverage; penalty 1e3 fit IoU vs mean %.4f "
              "(%d iterations, %.1fs)",
              mismatches, iou, r.iterations_used, seconds_since(t0))};
}

Outcome format_round_trips() {
  const auto dir = scratch_dir("acceptance");
  std::mt19937_64 rng(1008);
  const auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };

  std::uniform_real_distribution<float> uf(0.0f, 1.0f);
  std::vector<double> values(20 * 24 * 28);
  for (auto& x : values) x = static_cast<double>(uf(rng));
  const VoxelGrid grid({20, 24, 28}, values);
  write_voxels(dir / "a.vox32", grid);
  const VoxelGrid back = read_voxels(dir / "a.vox32");
  write_voxels(dir / "b.vox32", back);
  const bool vox_ok = back == grid && slurp(dir / "a.vox32") == slurp(dir / "b.vox32");

  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> pix(64 * 48);
  for (auto& x : pix) x = u(rng);
  write_silhouette(dir / "s.pgm", SilhouetteImage(48, 64, pix));
  const SilhouetteImage img = read_silhouette(dir / "s.pgm");
  double pgm_err = 0.0;
  for (std::size_t i = 0; i < pix.size(); ++i) pgm_err = std::max(pgm_err, std::abs(img[i] - pix[i]));
  const bool pgm_ok = img.height() == 48 && img.width() == 64 && pgm_err <= 1.0 / 510.0;

  const TriangleMesh mesh = marching_cubes(
      voxelize_primitive({Primitive::Mug, {}, {32, 32, 32}}).to_occupancy(), 0.5);
  write_mesh_obj(dir / "m.obj", mesh);
  std::ifstream obj(dir / "m.obj");
  std::size_t v = 0, f = 0;
  std::string line;
  while (std::getline(obj, line)) {
    v += line.rfind("v ", 0) == 0;
    f += line.rfind("f ", 0) == 0;
  }
  const bool obj_ok = v == mesh.vertices.size() && f == mesh.triangles.size() && f > 0;
  std::filesystem::remove_all(dir);
  return {vox_ok && pgm_ok && obj_ok,
          fmt(".vox32 bit-exact %s; PGM max error %.5f (bound %.5f); OBJ %zu/%zu vertices, %zu/%zu faces",
              vox_ok ? "yes" : "no", pgm_err, 1.0 / 510.0, v, mesh.vertices.size(), f,
              mesh.triangles.size())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 gradient correctness", gradient_correctness},
      {"2 renderer invariants", renderer_invariants},
      {"3 visual-hull recovery", visual_hull_recovery},
      {"4 pose recovery", pose_recovery},
      {"5 staged schedule", staged_schedule},
      {"6 metric oracles", metric_oracles},
      {"7 mean-shape behavior", mean_shape_behavior},
      {"8 format round-trips", format_round_trips},
  };
  // Optional arguments select criteria by number.
  std::vector<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name.substr(0, 1)) == only.end()) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
