#include <iostream>
#include <string>
#include <vector>

#include "rsmooth/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rsmooth::dispatch(args, std::cout, std::cerr);
}
