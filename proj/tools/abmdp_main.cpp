#include "abmdp/runner.hpp"

int main(int argc, char** argv) { return abmdp::cli_main(argc, argv); }
