#include "qsing/cli.hpp"

int main(int argc, char** argv) { return qsing::cli_main(argc, argv); }
