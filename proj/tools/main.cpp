#include "commands.hpp"

int main(int argc, char** argv) { return krein::app::cli_main(argc, argv); }
