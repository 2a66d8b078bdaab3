#include <iostream>
#include <string>
#include <vector>

#include "etmatch/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return etmatch::run_cli(args, std::cout, std::cerr);
}
