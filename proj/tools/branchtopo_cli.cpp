#include <iostream>

#include <branchtopo/cli.hpp>

int main(int argc, char** argv) { return branchtopo::cli::run(argc, argv, std::cout, std::cerr); }
