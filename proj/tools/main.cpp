// SPDX-License-Identifier: Apache-2.0
#include "voxsil/cli.hpp"

int main(int argc, char** argv) { return voxsil::cli_main(argc, argv); }
