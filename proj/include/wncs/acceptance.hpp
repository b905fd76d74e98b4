#pragma once

// Release checks: ten end-to-end criteria run against the shipped configs,
// each with pinned tolerances and a wall-clock budget. The CLI test binary
// prints one line per criterion.

#include <string>
#include <vector>

namespace wncs {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

std::vector<CriterionResult> run_acceptance(const std::string& config_dir,
                                            unsigned threads = 0);

} // namespace wncs
