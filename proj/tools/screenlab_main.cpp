#include "screenlab/cli.hpp"

int main(int argc, char** argv) { return screenlab::run_cli(argc, argv); }
