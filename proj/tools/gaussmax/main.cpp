#include <iostream>
#include <string>
#include <vector>

#include "gaussmax/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gaussmax::cli::run(args, std::cout, std::cerr);
}
