#include <gammoments/cli.hpp>

int main(int argc, char** argv) { return gammoments::cli::run(argc, argv); }
