#include "shortck/cli.hpp"

int main(int argc, char** argv) { return shortck::cli::run(argc, argv); }
