#include "commands.hpp"

int main(int argc, char** argv) { return bfseg::cli::run(argc, argv); }
