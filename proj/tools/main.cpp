#include <iostream>

#include "mbe/cli.hpp"

int main(int argc, char** argv) { return mbe::cli::run(argc, argv, std::cout, std::cerr); }
