#include <iostream>

#include "sqfn/cli.hpp"

int main(int argc, char** argv) { return sqfn::cli::main(argc, argv, std::cout, std::cerr); }
