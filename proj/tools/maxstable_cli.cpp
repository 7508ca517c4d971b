#include <iostream>

#include "runner.hpp"

int main(int argc, char** argv) {
  return maxstable::cli::main_entry(argc, argv, std::cout, std::cerr);
}
