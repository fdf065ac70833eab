// Acceptance suite: runs the full reproduction matrix and prints one
// pass/fail line per criterion. Exit code 0 iff every criterion passed.

#include "nldiff/suite.hpp"

#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
    nldiff::SuiteOptions opts;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) opts.quick = true;
        else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) opts.only = argv[++i];
    }
    const auto results = nldiff::run_suite(opts, std::cout);
    const bool ok = nldiff::all_passed(results);
    std::cout << (ok ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << " ("
              << results.size() << " run)\n";
    return ok ? 0 : 1;
}
