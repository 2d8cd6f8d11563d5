#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  return pfc3d::cli::cli_main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
