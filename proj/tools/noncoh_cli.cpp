#include <iostream>

#include "noncoh/cli.hpp"

int main(int argc, char** argv) { return noncoh::cli::run(argc, argv, std::cout, std::cerr); }
