#include <iostream>

#include "entropyrate/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return entropyrate::cli::run(argc, argv, std::cout, std::cerr);
}
