#include <iostream>

#include "hrp/cli.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return hrp::cli::run(argc, argv, std::cout, std::cerr);
}
