#include "trajacast/experiment.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return trajacast::run_cli(argc, argv, std::cout, std::cerr);
}
