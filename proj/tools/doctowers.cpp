// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "doctowers/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return doctowers::cli::run(args, std::cout, std::cerr);
}
