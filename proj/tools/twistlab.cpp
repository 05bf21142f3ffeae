#include <iostream>

#include "twistlab/cli/cli.hpp"

int main(int argc, char** argv) { return twistlab::cli::run(argc, argv, std::cout, std::cerr); }
