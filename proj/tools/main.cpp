#include <iostream>

#include "folio/cli.hpp"

int main(int argc, char** argv) { return folio::run_cli(argc, argv, std::cout, std::cerr); }
