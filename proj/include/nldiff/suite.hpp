#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nldiff {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct SuiteOptions {
    bool quick = false;     // halved grids, doubled tolerances
    std::string only;       // substring filter on criterion names
    std::string out_dir;    // optional artifact directory
};

/// Run the reproduction matrix (12 criteria), printing one pass/fail line per
/// criterion to `log`. Returns all results; overall success = every selected
/// criterion passed.
std::vector<CriterionResult> run_suite(const SuiteOptions& opts, std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace nldiff
