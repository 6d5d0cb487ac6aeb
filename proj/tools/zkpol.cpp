#include <iostream>

#include "zkpol/appio.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return zkpol::appio::run_cli(args, std::cout, std::cerr);
}
