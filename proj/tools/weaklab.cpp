#include <iostream>

#include "weaklab/cli.hpp"

int main(int argc, char** argv) { return weaklab::run_cli(argc, argv, std::cout, std::cerr); }
