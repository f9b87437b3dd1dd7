#include <iostream>

#include "llspec/cli.hpp"

int main(int argc, char** argv) { return llspec::run_cli(argc, argv, std::cout, std::cerr); }
