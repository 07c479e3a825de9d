#include "qsa/cli.hpp"

int main(int argc, char** argv) { return qsa::run_cli(argc, argv); }
