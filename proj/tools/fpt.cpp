#include <iostream>

#include "fpt/cli/commands.hpp"

int main(int argc, char** argv) { return fpt::cli::run_cli(argc, argv, std::cout, std::cerr); }
