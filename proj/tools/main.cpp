#include <iostream>

#include "edgesync/cli.hpp"

int main(int argc, char** argv) { return edgesync::run_cli(argc, argv, std::cout, std::cerr); }
