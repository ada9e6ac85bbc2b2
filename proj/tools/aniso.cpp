#include <iostream>

#include "aniso/cli.hpp"

int main(int argc, char** argv) { return aniso::cli_main(argc, argv, std::cout, std::cerr); }
