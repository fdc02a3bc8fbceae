#include <riskbandit/cli.hpp>

int main(int argc, char** argv) { return riskbandit::run_cli(argc, argv); }
