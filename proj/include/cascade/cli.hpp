// Command-line front end: solve, exact, gen, simulate, bench.

#pragma once

namespace cascade::cli {

// Parses argv and executes one subcommand. Returns the process exit code:
// 0 success, 2 input error (bad flags, unparsable or invalid instance),
// 3 infeasible parameters or an instance beyond the oracle size limits.
int run(int argc, const char* const* argv);

}  // namespace cascade::cli
