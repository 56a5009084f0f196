#include <iostream>
#include <string>
#include <vector>

#include "essim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return essim::run_cli(args, std::cout, std::cerr);
}
