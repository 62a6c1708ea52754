#include <iostream>

#include "gentle/cli.hpp"

int main(int argc, char** argv) { return gentle::run_cli(argc, argv, std::cout, std::cerr); }
