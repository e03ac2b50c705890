#include <iostream>
#include <string>
#include <vector>

#include "opfrob/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return opfrob::run_cli(args, std::cout, std::cerr);
}
