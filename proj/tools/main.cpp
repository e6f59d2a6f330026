#include "experiment.hpp"

int main(int argc, char** argv) { return saw::cli::run(argc, argv); }
