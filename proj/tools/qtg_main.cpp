#include <iostream>

#include "qtg/cli.hpp"

int main(int argc, char** argv) {
  return qtg::run_cli(argc, argv, std::cout, std::cerr);
}
