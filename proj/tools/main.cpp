#include <iostream>

#include "hopi/cli.hpp"

int main(int argc, char** argv) { return hopi::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
