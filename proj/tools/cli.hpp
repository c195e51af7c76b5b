#pragma once

#include <iosfwd>

namespace holo::cli {

/// Runs one subcommand. Returns 0 on success, 1 on a domain error (error
/// JSON on `err`) and 2 on bad usage or unreadable input.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace holo::cli
