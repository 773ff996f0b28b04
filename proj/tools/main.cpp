#include <iostream>

#include "wps/cli.hpp"

int main(int argc, char** argv) { return wps::cli::run(argc, argv, std::cout, std::cerr); }
