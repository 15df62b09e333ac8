#include <iostream>

#include "qnl/cli.hpp"

int main(int argc, char** argv) { return qnl::cli::run(argc, argv, std::cout, std::cerr); }
