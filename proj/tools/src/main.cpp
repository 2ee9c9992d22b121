#include <iostream>

#include "cdmapower_cli/commands.hpp"

int main(int argc, char** argv) {
  return cdmapower::cli::run_cli(argc, argv, std::cout, std::cerr);
}
