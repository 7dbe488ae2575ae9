#include "hilbert/cli.hpp"

int main(int argc, char** argv) { return hilbert::run_cli(argc, argv); }
