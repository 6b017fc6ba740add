#include <iostream>

#include "invscat/cli.hpp"

int main(int argc, char** argv) {
  return invscat::cli::run(argc, argv, std::cout, std::cerr);
}
