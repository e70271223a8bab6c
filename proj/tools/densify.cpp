#include <iostream>
#include <string>
#include <vector>

#include "densify/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return densify::run_cli(args, std::cout, std::cerr);
}
