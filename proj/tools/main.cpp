#include "cli.hpp"

int main(int argc, char** argv) { return chromasim::cli::run(argc, argv); }
