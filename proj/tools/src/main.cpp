#include <iostream>

#include "powersum/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return powersum::run(args, std::cout, std::cerr);
}
