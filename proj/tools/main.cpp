#include <iostream>

#include "spinwire/cli.hpp"

int main(int argc, char** argv) { return spinwire::cli::run(argc, argv, std::cout, std::cerr); }
