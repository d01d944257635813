#include "cli.hpp"

int main(int argc, char** argv) { return modzero::cli::run(argc, argv); }
