#include <iostream>

#include "qcompat/cli.hpp"

int main(int argc, char** argv) {
  return qcompat::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
