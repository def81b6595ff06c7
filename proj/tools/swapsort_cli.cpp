#include <iostream>
#include <string>
#include <vector>

#include "swapsort/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return swapsort::run_cli(args, std::cout, std::cerr);
}
