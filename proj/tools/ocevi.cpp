#include <iostream>
#include <string>
#include <vector>

#include "ocevi/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return ocevi::cli_dispatch(args, std::cout, std::cerr);
}
