#pragma once

#include <iosfwd>

#include "sqzmetro/cli/validation.hpp"

namespace sqzmetro::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitBadInput = 2,
  kExitRegimeRefused = 3,
};

/// Entry point of the sqzmetro tool. Tables go to `out` (or --out), notes,
/// warnings and timing to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            const ValidationHooks& hooks = {});

}  // namespace sqzmetro::cli
