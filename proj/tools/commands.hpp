#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edepth::cli {

/// Runs the `edepth` command line. `args` excludes the program name. Returns
/// the process exit code; regular output goes to `out`, usage errors,
/// warnings and notices to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Thread count used when --threads is absent: EDEPTH_THREADS if set, else 1.
unsigned default_threads();

} // namespace edepth::cli
