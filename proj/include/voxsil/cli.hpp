// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace voxsil {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;

// Subcommands: gen, mean, render, fit-shape, fit-pose, fit-joint, eval-iou,
// eval-pose, eval-hausdorff, mesh. Returns 0 on success, 1 on usage error and
// 2 on I/O or format error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace voxsil
