#include <iostream>

#include "garota/cli/commands.h"

int main(int argc, char** argv) {
  return garota::cli::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
