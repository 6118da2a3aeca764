#include "qm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return qm::cli::run(argc, argv, std::cout, std::cerr); }
