// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace voxsil {

struct Evaluation {
  double loss = 0.0;
  std::vector<double> gradient;
};

struct DescentOptions {
  int max_iterations = 100;
  double convergence_tol = 1e-7;  // stop when the relative decrease falls below this
  double rms_decay = 0.9;
  int max_halvings = 12;
};

struct DescentResult {
  std::vector<double> parameters;
  Evaluation final;
  std::vector<double> loss_trace;  // non-increasing
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<Evaluation(std::span<const double>)>;
using Projection = std::function<void(std::span<double>)>;

// Gradient descent with per-parameter RMS step scaling. A step that raises
// the loss is retried at half length; the scale recovers after accepted
// steps but never exceeds `base_step`.
DescentResult adaptive_descent(std::vector<double> parameters, std::span<const double> base_step,
                               const Objective& objective, const DescentOptions& options,
                               const Projection& project = {});

}  // namespace voxsil
