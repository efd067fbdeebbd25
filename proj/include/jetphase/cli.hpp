#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace jetphase::cli {

/// Runs one command line (without the program name). Results go to `out` (or the
/// --output file), diagnostics to `err`. Returns the process exit code: 0 on success,
/// 1 when an --assert verdict is false, 2 on input errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace jetphase::cli
