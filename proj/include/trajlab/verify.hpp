#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace trajlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

// Runs every verification criterion on built-in synthetic fixtures. Each
// entry is an independent check with its tolerance pinned in code.
std::vector<CriterionResult> run_verification(int threads = 1);

// Pass/fail table, one line per criterion; returns true when all passed.
bool print_verification(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace trajlab
