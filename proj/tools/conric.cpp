#include <iostream>
#include <string>
#include <vector>

#include "conric/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return conric::cli::run(args, std::cout, std::cerr);
}
