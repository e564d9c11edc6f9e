#include <iostream>
#include <string>
#include <vector>

#include "contact_cli/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return contact::cli::run_cli(args, std::cout, std::cerr);
}
