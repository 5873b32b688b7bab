#include <iostream>
#include <string>
#include <vector>

#include "stz/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return stz::run_cli(args, std::cout, std::cerr);
}
