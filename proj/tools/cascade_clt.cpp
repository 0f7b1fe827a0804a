#include <iostream>

#include "cclt/app.hpp"

int main(int argc, char** argv) { return cclt::run_cli(argc, argv, std::cout, std::cerr); }
