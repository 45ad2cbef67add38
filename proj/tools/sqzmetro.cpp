#include <iostream>

#include "sqzmetro/cli/app.hpp"

int main(int argc, char** argv) { return sqzmetro::cli::run_cli(argc, argv, std::cout, std::cerr); }
