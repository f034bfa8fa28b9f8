#include <iostream>

#include "syzlab/cli.hpp"

int main(int argc, char** argv) { return syzlab::cli::run(argc, argv, std::cout, std::cerr); }
