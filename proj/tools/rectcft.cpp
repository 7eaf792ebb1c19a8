#include "rectcft/cli/app.hpp"

int main(int argc, char** argv) { return rectcft::cli::run(argc, argv); }
