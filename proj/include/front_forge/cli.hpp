#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace front_forge {

/// Process exit codes of front-forge.
enum ExitCode : int {
    kExitOk = 0,
    kExitChecksFailed = 1,  // a verification check failed, or report-diff found a flip
    kExitConfig = 2,        // bad invocation or config; the message names the key path
    kExitNumerical = 3,     // blow-up or solver breakdown; the message names the snapshot
    kExitRuntime = 4,       // I/O and other failures
};

/// Runs one front-forge invocation; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace front_forge
