#include <iostream>

#include "prepdiag/app.hpp"

int main(int argc, char** argv) { return prepdiag::run_cli(argc, argv, std::cout, std::cerr); }
