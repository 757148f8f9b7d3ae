#pragma once

#include <iosfwd>

namespace connectgraph {

/// Runs one command. Results go to --output when given, else to `out`;
/// diagnostics go to `err`.
/// Exit codes: 0 success, 2 invalid flags or input, 1 numerical failure or
/// a failed verify check.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace connectgraph
