#pragma once

#include <iosfwd>

namespace phc {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidationFailed = 1,
    kExitInvalidConfig = 2,
    kExitUnwritable = 3,
};

/// Entry point of the phcontrast tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phc
