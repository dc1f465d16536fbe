#include "anholo/cli.hpp"

int main(int argc, char** argv) { return anholo::run_cli(argc, argv); }
