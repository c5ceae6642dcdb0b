#pragma once

#include <string>
#include <vector>

namespace optexec {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

/// The property-based validation suite over the built-in demo parameter
/// sets.  `full` adds the Monte Carlo checks (>= 1e4 paths); the quick
/// level covers the deterministic solver, oracle and figure checks.
std::vector<CheckResult> run_validation(bool full);

std::string validation_json(const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace optexec
