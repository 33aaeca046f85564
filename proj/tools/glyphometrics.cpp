#include <iostream>

#include "glyphometrics/cli.hpp"

int main(int argc, char** argv) {
  return glyphometrics::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
