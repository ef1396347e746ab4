#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return stochcirc::cli::run(argc, argv, std::cout, std::cerr); }
