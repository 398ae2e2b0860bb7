#include "vcprov/cli.hpp"

int main(int argc, char** argv) {
    return vcprov::run_cli(argc, argv);
}
