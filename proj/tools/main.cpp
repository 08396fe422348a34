#include <iostream>

#include "vcoop/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vcoop::run_cli(args, std::cout, std::cerr);
}
