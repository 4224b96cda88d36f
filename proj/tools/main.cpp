#include <iostream>
#include <string>
#include <vector>

#include "regrew/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return regrew::run_cli(args, std::cout, std::cerr);
}
