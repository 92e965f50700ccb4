// The acceptance suite: one runner per criterion, each printing a pass/fail
// line with its measured quantities.
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace cgoscat {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct AcceptanceOptions {
    int grid_n = 64;
    double half_width = 12.0;
    double tol_scale = 1.0;  // multiplies every tolerance (1 = nominal gates)
    int threads = 0;
    std::uint64_t seed = 2024;
    int only = 0;  // run a single criterion id; 0 = all
};

// Runs criteria 1..11; logs one line per criterion to `log`.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& log);

}  // namespace cgoscat
