#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "qlstab/config.hpp"

namespace qlstab {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitConfig = 2,
  kExitConvergence = 3,
  kExitStep = 4,
};

/// Failure to create or write an output file; the message carries the path.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Executes cfg.command and writes into cfg.out:
///   config.txt    effective configuration
///   summary.txt   key=value scalars, including regime and config_hash
///   series.csv    iteration log or time series
///   field_*.txt   final fields, one value (or "re im") per line
/// Progress lines go to log. Returns an ExitCode.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace qlstab
