#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sqzmetro/network.hpp"
#include "sqzmetro/types.hpp"

namespace sqzmetro::cli {

enum class ValidationLevel { quick, full };

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  /// nullptr when every check passed.
  const CheckResult* first_failure() const;
};

/// Replaceable engines, for exercising the suite against broken implementations.
struct ValidationHooks {
  using Overlap = std::function<double(const SqueezeParameter&, const network::NetworkUnitary&, const PhaseVector&)>;
  Overlap gaussian_overlap;  ///< defaults to gaussian::expectation_O
};

/// quick: cross-engine equality on 20 seeded cases, vanishing odd series
/// terms, and the phase-variance identity. full adds the Mach-Zehnder
/// factorisation and the series convergence ladder.
ValidationReport run_validation(ValidationLevel level, const ValidationHooks& hooks = {});

}  // namespace sqzmetro::cli
