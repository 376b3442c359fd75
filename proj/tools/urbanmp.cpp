#include <iostream>

#include "urbanmp/cli.hpp"

int main(int argc, char** argv)
{
    return urbanmp::cli::run(argc, argv, std::cout, std::cerr);
}
