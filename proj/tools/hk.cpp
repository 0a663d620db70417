#include <iostream>

#include "hk/cli.hpp"

int main(int argc, char **argv) { return hk::cli::run(argc, argv, std::cout, std::cerr); }
