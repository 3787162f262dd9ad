#include <iostream>

#include "mshj/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mshj::run_cli(args, std::cout, std::cerr);
}
