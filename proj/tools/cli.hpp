#pragma once

#include <iosfwd>

namespace hypcap::cli {

// Parses the command line and runs one experiment; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hypcap::cli
