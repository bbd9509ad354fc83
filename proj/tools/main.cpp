#include <iostream>

#include "logopole/cli.hpp"

int main(int argc, char** argv)
{
    return logopole::cli::run(argc, argv, std::cout, std::cerr);
}
