#include "metaview/cli.hpp"

int main(int argc, char** argv) { return metaview::cli_main(argc, argv); }
