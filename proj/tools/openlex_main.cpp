#include <iostream>

#include "openlex/cli/cli.hpp"

int main(int argc, char** argv) { return openlex::cli::run(argc, argv, std::cout, std::cerr); }
