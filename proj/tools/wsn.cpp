#include "wsn/cli.hpp"

int main(int argc, char** argv) { return wsn::run_cli(argc, argv); }
