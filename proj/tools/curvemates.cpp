#include <iostream>

#include "curvemates/cli.hpp"

int main(int argc, char** argv) { return curvemates::run_cli(argc, argv, std::cout, std::cerr); }
