#include <iostream>

#include "npovm/cli.hpp"

int main(int argc, char** argv) {
  return npovm::cli::run_main(argc, argv, std::cout, std::cerr);
}
