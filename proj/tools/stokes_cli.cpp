#include <iostream>
#include <string>
#include <vector>

#include "stokes/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return stokes::run_cli(args, std::cout, std::cerr);
}
