#include "cli.hpp"

int main(int argc, char** argv) { return unilab::app::run(argc, argv); }
