#include "hopfcalc/cli.hpp"

#include <iostream>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return hopfcalc::run_cli(args, std::cout, std::cerr);
}
