#include <iostream>
#include <string>
#include <vector>

#include "angio/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return angio::cli::run(args, std::cout, std::cerr);
}
