#include <iostream>

#include "fibsite/cli.hpp"

int main(int argc, char** argv) {
    return fibsite::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
