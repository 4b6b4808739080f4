#include <iostream>

#include "qhmp/commands.hpp"

int main(int argc, char** argv) {
  return qhmp::cli::run_cli(argc, argv, std::cout, std::cerr);
}
