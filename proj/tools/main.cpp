#include "scalarmc/cli.hpp"

int main(int argc, char** argv) { return scalarmc::run_cli(argc, argv); }
