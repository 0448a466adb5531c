#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace whybn::cli {

/// Exit statuses of `run`.
enum Exit : int {
  kOk = 0,
  kUsage = 1,           // bad flags or bindings
  kInvalidNetwork = 2,  // network file unreadable or invalid
  kImpossible = 3,      // conditioning on a zero-probability event
  kDivergence = 4,      // --oracle-check found a disagreement
};

/// Runs one command line (args excludes the program name). Results go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace whybn::cli
