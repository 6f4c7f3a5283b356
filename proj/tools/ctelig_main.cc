#include <iostream>
#include <string>
#include <vector>

#include "ctelig/cli/commands.h"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  std::vector<std::string> args(argv, argv + argc);
  return ctelig::cli::runCli(args, {std::cin, std::cout, std::cerr});
}
