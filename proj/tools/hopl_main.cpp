#include <iostream>

#include "hopl/cli.hpp"

int main(int argc, char** argv) { return hopl::run_cli(argc, argv, std::cout, std::cerr); }
