// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace doctowers::cli {

enum class ExitCode : int {
  Ok = 0,
  Usage = 1,
  Parse = 2,
  Io = 3,
};

/// Runs the `doctowers` command line (ingest, stats, scene, serve). `args`
/// excludes the program name. Diagnostics go to `err`, reports to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace doctowers::cli
