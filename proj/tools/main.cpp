#include <iostream>

#include "qapprox/cli.hpp"

int main(int argc, char** argv) { return qapprox::cli::run(argc, argv, std::cout, std::cerr); }
