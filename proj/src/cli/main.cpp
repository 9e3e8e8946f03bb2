#include "assembly/cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return assembly::cli::run(argc, argv, std::cout, std::cerr);
}
