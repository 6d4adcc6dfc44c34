#include <iostream>
#include <string>
#include <vector>

#include "mosgnn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return mosgnn::cli::run(args, std::cout, std::cerr);
}
