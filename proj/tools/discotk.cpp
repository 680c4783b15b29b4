#include <iostream>
#include <string>
#include <vector>

#include "discotk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return discotk::cli::run(args, std::cout, std::cerr);
}
