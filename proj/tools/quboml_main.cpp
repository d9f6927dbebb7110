#include "quboml/cli.hpp"

int main(int argc, char** argv) { return quboml::run(argc, argv); }
