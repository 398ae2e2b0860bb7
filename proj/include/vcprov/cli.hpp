#pragma once

namespace vcprov {

/// Entry point of the command line tool; argv follows main() conventions.
/// Returns 0 on success, 1 on a validation problem (bad flags, malformed
/// or invalid scenario), 2 on an I/O failure. Progress goes to stdout,
/// diagnostics to stderr.
int run_cli(int argc, const char* const* argv);

} // namespace vcprov
