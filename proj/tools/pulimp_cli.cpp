#include <iostream>

#include "pulimp/cli.hpp"

int main(int argc, char** argv) { return pulimp::run_command_line(argc, argv, std::cout, std::cerr); }
