#include "subml/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return subml::run_cli(argc, argv, std::cout, std::cerr); }
