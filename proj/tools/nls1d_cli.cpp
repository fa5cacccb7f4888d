#include <iostream>
#include <string>
#include <vector>

#include "nls1d/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return nls1d::run_cli(args, std::cout, std::cerr);
}
