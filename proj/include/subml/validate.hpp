#pragma once

// Self-checks behind `subml validate`.

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace subml {

struct CheckResult {
    std::string name;
    bool passed = false;
    bool skipped = false;
    std::string detail;
};

struct ValidateOptions {
    // Skip the Monte Carlo checks that need 10^5..10^6 trials.
    bool quick = false;
    // erfc under test; defaults to subml::erfc. Swappable so that a
    // deliberately broken implementation can be shown to fail.
    std::function<double(double)> erfc;
    unsigned threads = 0;
};

std::vector<CheckResult> run_validation(const ValidateOptions& opts);

// Fixed-width pass/fail table. Returns true when nothing failed.
bool print_validation(std::ostream& out, const std::vector<CheckResult>& results);

} // namespace subml
