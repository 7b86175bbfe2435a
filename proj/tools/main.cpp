#include "trajbench/cli.hpp"

int main(int argc, char** argv) {
    return trajbench::cli::dispatch(argc, argv);
}
