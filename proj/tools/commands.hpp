#pragma once

#include "run_config.hpp"

namespace bellsim::cli {

// Each command returns a process exit code: 0 done. Configuration and
// schedule problems surface as std::invalid_argument (caller maps to 1),
// unreadable/unwritable files as std::runtime_error (caller maps to 2).
int cmd_sweep(const RunConfig& config);
int cmd_chsh(const RunConfig& config);
int cmd_audit(const RunConfig& config);
int cmd_locality(const RunConfig& config);

}  // namespace bellsim::cli
