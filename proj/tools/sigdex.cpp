#include <iostream>
#include <vector>

#include "sigdex/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sigdex::run_cli(args, std::cout, std::cerr);
}
