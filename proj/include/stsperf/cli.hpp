#pragma once

namespace stsperf {

// Parses argv, dispatches to a subcommand, reports problems on stderr (error
// codes, never stack traces). Diagnostics go to stderr; results go to stdout
// as key=value lines or file payloads.
//
// Exit codes: 0 success, 1 runtime failure (NonTermination, DeadEnd, I/O,
// SingularSystem), 2 invalid input (parse/validation errors, bad flags).
int run_cli(int argc, const char* const* argv);

} // namespace stsperf
