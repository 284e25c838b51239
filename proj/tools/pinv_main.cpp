#include <iostream>

#include "pinv/cli.hpp"

int main(int argc, char** argv)
{
    return pinv::cli::run(argc, argv, std::cout, std::cerr);
}
