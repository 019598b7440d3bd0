#include <iostream>

#include "hypdisk/cli.hpp"

int main(int argc, char** argv) {
  return hypdisk::cli::main_entry(argc, argv, std::cout, std::cerr);
}
