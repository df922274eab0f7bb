#include "qthermo/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return qthermo::cli_main(argc, argv, std::cout, std::cerr);
}
