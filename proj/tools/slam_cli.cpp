#include <iostream>

#include "slam/cli.hpp"

int main(int argc, char** argv) {
    return slam::run_cli(argc, argv, std::cout, std::cerr);
}
