#include "hypfred/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hypfred::run_cli(argc, argv, std::cout, std::cerr); }
