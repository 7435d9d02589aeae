#include <iostream>

#include "cover_census/cli.hpp"

int main(int argc, char** argv) {
  try {
    return cover_census::run_cli(argc, argv, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return cover_census::kExitMismatch;
  }
}
