#include <iostream>

#include "stripforge/cli.hpp"

int main(int argc, char** argv)
{
    return stripforge::cli::run(argc, argv, std::cout, std::cerr);
}
