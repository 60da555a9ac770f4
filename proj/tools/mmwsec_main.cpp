#include "mmwsec/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return mmwsec::cli::main_entry({argv + 1, argv + argc}, std::cout, std::cerr);
}
