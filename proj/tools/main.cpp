#include <iostream>

#include "bilearn/cli.hpp"

int main(int argc, char** argv)
{
    return bilearn::cli::run(argc, argv, std::cout, std::cerr);
}
