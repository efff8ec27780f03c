#include <iostream>
#include <string>
#include <vector>

#include "fofkit/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fofkit::run_cli(args, std::cout, std::cerr);
}
