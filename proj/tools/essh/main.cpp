#include <iostream>

#include "essh/runner/cli.hpp"

int main(int argc, char** argv) { return essh::runner::cli_main(argc, argv, std::cout, std::cerr); }
