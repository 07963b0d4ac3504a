#include "ag/cli.hpp"

int main(int argc, char** argv) {
    return ag::cli::run(argc, argv);
}
