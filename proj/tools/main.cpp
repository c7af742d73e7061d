#include <iostream>

#include "zmeq/cli/cli.hpp"

int main(int argc, char** argv) { return zmeq::cli::run_cli(argc, argv, std::cout, std::cerr); }
