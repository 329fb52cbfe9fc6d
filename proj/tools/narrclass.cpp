#include <iostream>
#include <string>
#include <vector>

#include "narrclass/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return narrclass::cli::run(args, std::cout, std::cerr);
}
