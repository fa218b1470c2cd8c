// SPDX-License-Identifier: Apache-2.0
#include "voxsil/descent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace voxsil {

DescentResult adaptive_descent(std::vector<double> parameters, std::span<const double> base_step,
                               const Objective& objective, const DescentOptions& options,
                               const Projection& project) {
  if (base_step.size() != parameters.size()) {
    throw std::invalid_argument("adaptive_descent: step vector size mismatch");
  }
  if (project) project(parameters);

  DescentResult out;
  Evaluation current = objective(parameters);
  out.loss_trace.push_back(current.loss);

  std::vector<double> mean_sq(parameters.size(), 0.0);
  std::vector<double> trial(parameters.size());
  double decay_power = 1.0;
  double scale = 1.0;

  for (int it = 0; it < options.max_iterations; ++it) {
    ++out.iterations;
    decay_power *= options.rms_decay;
    const double bias = 1.0 - decay_power;
    bool any = false;
    for (std::size_t i = 0; i < parameters.size(); ++i) {
      const double g = current.gradient[i];
      mean_sq[i] = options.rms_decay * mean_sq[i] + (1.0 - options.rms_decay) * g * g;
      any = any || g != 0.0;
    }
    if (!any) {
      out.converged = true;
      break;
    }

    bool accepted = false;
    Evaluation next;
    for (int attempt = 0; attempt <= options.max_halvings; ++attempt) {
      for (std::size_t i = 0; i < parameters.size(); ++i) {
        const double rms = std::sqrt(mean_sq[i] / bias);
        const double dir = rms > 0.0 ? current.gradient[i] / rms : 0.0;
        trial[i] = parameters[i] - scale * base_step[i] * dir;
      }
      if (project) project(trial);
      next = objective(trial);
      if (next.loss <= current.loss) {
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      out.converged = true;
      break;
    }

    const double decrease = current.loss - next.loss;
    const double reference = current.loss;
    parameters.swap(trial);
    current = std::move(next);
    out.loss_trace.push_back(current.loss);
    if (decrease <= options.convergence_tol * reference) {
      out.converged = true;
      break;
    }
    scale = std::min(1.0, scale * 1.5);
  }

  out.parameters = std::move(parameters);
  out.final = std::move(current);
  return out;
}

}  // namespace voxsil
