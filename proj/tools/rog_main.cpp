#include <iostream>

#include "rog/cli.hpp"

int main(int argc, char** argv) { return rog::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
