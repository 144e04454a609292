#include "cubicshape/cli.hpp"

int main(int argc, char** argv) { return cubicshape::run_cli(argc, argv); }
