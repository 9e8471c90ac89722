#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return amap::cli::run(argc, argv, std::cout, std::cerr); }
