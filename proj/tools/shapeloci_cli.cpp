#include <iostream>
#include <string>
#include <vector>

#include "shapeloci/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return shapeloci::cli::run(args, std::cin, std::cout, std::cerr);
}
