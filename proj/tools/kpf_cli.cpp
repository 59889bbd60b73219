#include "kpf/cli.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    return kpf::cli::run(argc, argv, std::cout, std::cerr);
}
