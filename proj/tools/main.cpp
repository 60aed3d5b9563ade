#include "srlr/cli.hpp"

int main(int argc, char** argv) { return srlr::cli::run(argc, argv); }
