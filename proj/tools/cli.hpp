#pragma once

#include <iosfwd>

namespace romanov::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kFormat = 3,
    kCapacity = 4,
    kInvariant = 5,
};

// Parses argv, runs one subcommand and writes its report. Never throws;
// failures come back as an ExitCode with the message on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace romanov::cli
