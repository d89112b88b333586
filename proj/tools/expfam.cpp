#include <iostream>

#include "expfam/cli.hpp"

int main(int argc, char** argv) { return expfam::cli::run(argc, argv, std::cout, std::cerr); }
