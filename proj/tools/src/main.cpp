#include <iostream>

#include "eotile/cli/cli.hpp"

int main(int argc, char** argv) { return eotile::cli::run(argc, argv, std::cout, std::cerr); }
