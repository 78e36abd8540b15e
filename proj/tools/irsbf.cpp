#include <iostream>

#include "irs/io.hpp"

int main(int argc, char** argv) { return irs::io::run_cli(argc, argv, std::cout, std::cerr); }
