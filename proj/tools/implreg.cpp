#include <iostream>

#include "implreg/cli.hpp"

int main(int argc, char** argv) {
  return implreg::cli::run(argc, argv, std::cout, std::cerr);
}
