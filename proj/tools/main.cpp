#include <iostream>

#include "twistlab/cli.hpp"

int main(int argc, char** argv) { return twistlab::run_cli(argc, argv, std::cout, std::cerr); }
