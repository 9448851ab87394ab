#include <iostream>
#include <string>
#include <vector>

#include "prradar/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return prradar::cli::main(args, std::cout, std::cerr);
}
