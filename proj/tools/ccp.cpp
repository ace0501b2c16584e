#include <iostream>
#include <string>
#include <vector>

#include "ccp/cli.hpp"

int main(int argc, char** argv) {
  return ccp::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
