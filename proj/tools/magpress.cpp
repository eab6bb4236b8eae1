#include <iostream>

#include "magpress/cli.hpp"

int main(int argc, char **argv) {
  return magpress::cli::run_command(argc, argv, std::cout, std::cerr);
}
