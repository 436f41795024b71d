#include <iostream>

#include "entwit/cli.hpp"

int main(int argc, char **argv) { return entwit::cli::run(argc, argv, std::cout, std::cerr); }
