#include "grforge/cli.h"

#include <iostream>

int main(int argc, char **argv) {
    return grforge::run_cli(argc, argv, std::cout, std::cerr);
}
