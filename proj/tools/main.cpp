#include "runner.hpp"

int main(int argc, char** argv) { return scenerylab::cli::run(argc, argv); }
