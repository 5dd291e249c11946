#include <iostream>

#include "ergofit/cli.hpp"

int main(int argc, char** argv) { return ergofit::cli::run(argc, argv, std::cout, std::cerr); }
