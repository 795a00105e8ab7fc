#include "borninfeld/cli.hpp"

int main(int argc, char** argv) {
    return borninfeld::cli::run(argc, argv);
}
