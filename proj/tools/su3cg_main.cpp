#include <iostream>
#include <vector>

#include "su3cg/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.push_back(argv[i]);  // CLI11 wants reversed
    return su3cg::cli::run(std::move(args), std::cout, std::cerr);
}
