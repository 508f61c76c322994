#include "front_forge/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return front_forge::run_cli({argv, argv + argc}, std::cout, std::cerr); }
