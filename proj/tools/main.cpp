#include "cli/app.hpp"

int main(int argc, char** argv) { return dmfd::cli::run(argc, argv); }
