#include <iostream>
#include <string>
#include <vector>

#include "pairglow/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return pairglow::cli::run(args, std::cout, std::cerr);
}
