#include "hqr/cli.hpp"

int main(int argc, char** argv) { return hqr::cli::run(argc, argv); }
