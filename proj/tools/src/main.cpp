#include "commands.hpp"

int main(int argc, char** argv) { return mkg::cli::run_cli(argc, argv); }
