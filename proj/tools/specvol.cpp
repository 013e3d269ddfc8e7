#include <iostream>
#include <string>
#include <vector>

#include "specvol/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return specvol::run_cli(args, std::cout, std::cerr);
}
