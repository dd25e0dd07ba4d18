#include "ptcount/cli.hpp"

int main(int argc, char** argv) { return ptcount::cli::run(argc, argv); }
