#pragma once

#include <iosfwd>

namespace qlstab {

/// qlstab <command> --config <path> [--key value ...]
/// Returns the process exit status (0, 1 I/O, 2 config, 3 convergence, 4 step failure).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qlstab
