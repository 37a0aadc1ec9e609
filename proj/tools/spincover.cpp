#include <iostream>

#include "spincover/cli.hpp"

int main(int argc, char** argv) { return spincover::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
