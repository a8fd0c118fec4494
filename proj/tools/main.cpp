#include <iostream>

#include "webcorpus/cli/cli.hpp"

int main(int argc, char** argv) { return webcorpus::run_cli(argc, argv, std::cout, std::cerr); }
