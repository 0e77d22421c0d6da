#include <iostream>

#include "ahcert/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ahcert::cli::run(args, std::cout, std::cerr);
}
