#pragma once

#include <iosfwd>

namespace tagrank {

/// Runs the `tagrank` command line in-process. Returns the exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace tagrank
