#include "fatigue/runner.hpp"

int main(int argc, char** argv) { return fatigue::run_cli(argc, argv); }
