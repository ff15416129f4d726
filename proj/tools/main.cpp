#include <iostream>
#include <string>
#include <vector>

#include "sumrules/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return sumrules::cli::run(args, std::cout, std::cerr);
}
