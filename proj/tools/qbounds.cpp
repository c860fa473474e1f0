#include "qbounds/cli.hpp"

int main(int argc, char** argv) { return qbounds::cli::main(argc, argv); }
