#pragma once

#include <ostream>

// Command-line front end: eval, grid, compare and errormap.
namespace logopole::cli {

// Exit codes.
enum Exit : int {
    Ok = 0,
    BadFlags = 2,
    Singular = 3,
    NoConvergence = 4,
    IoError = 5,
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace logopole::cli
