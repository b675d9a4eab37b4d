#include "lpq/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lpq::run_cli(argc, argv, std::cout, std::cerr); }
