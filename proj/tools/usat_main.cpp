#include <iostream>

#include "usat/cli.hpp"

int main(int argc, char** argv) {
  return usat::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
