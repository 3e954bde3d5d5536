#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace alertlens::cli {

// Runs one command line (without the program name) and returns the exit
// status. Commands: generate, ingest, clean, stats, query, export, serve.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace alertlens::cli
