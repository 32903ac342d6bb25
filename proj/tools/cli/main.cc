#include <iostream>
#include <string>
#include <vector>

#include "cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return copula_ot::cli::run(args, std::cout, std::cerr, copula_ot::cli::Environment::from_process());
}
