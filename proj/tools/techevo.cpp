#include <iostream>
#include <string>
#include <vector>

#include "techevo/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return techevo::run_cli(args, std::cout, std::cerr);
}
