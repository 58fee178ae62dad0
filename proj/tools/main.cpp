#include <iostream>
#include <string>
#include <vector>

#include "rpspline/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rpspline::cli::run(args, std::cout, std::cerr);
}
