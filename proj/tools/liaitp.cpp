#include "liaitp/frontend.hpp"

int main(int argc, char **argv) { return liaitp::run_cli(argc, argv); }
