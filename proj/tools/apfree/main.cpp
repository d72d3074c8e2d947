#include <iostream>

#include "apfree/cli.hpp"

int main(int argc, char** argv) { return apfree::cli::run(argc, argv, std::cout, std::cerr); }
