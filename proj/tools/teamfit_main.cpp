#include <iostream>
#include <string>
#include <vector>

#include "teamfit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return teamfit::run_cli(args, std::cout, std::cerr);
}
