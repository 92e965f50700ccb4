// Acceptance driver: runs every criterion on the 64^3, L = 12 grid at the
// nominal tolerances and prints one pass/fail line per criterion.
#include <cstring>
#include <iostream>
#include <string>

#include "cgoscat/acceptance.hpp"

int main(int argc, char** argv) {
    cgoscat::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        auto next = [&](double fallback) {
            return i + 1 < argc ? std::stod(argv[++i]) : fallback;
        };
        if (arg == "--n")
            opts.grid_n = static_cast<int>(next(opts.grid_n));
        else if (arg == "--half-width")
            opts.half_width = next(opts.half_width);
        else if (arg == "--tol-scale")
            opts.tol_scale = next(opts.tol_scale);
        else if (arg == "--threads")
            opts.threads = static_cast<int>(next(opts.threads));
        else if (arg == "--seed")
            opts.seed = static_cast<std::uint64_t>(next(opts.seed));
        else if (arg == "--only")
            opts.only = static_cast<int>(next(0));
        else {
            std::cerr << "unknown option " << arg << "\n";
            return 2;
        }
    }

    auto results = cgoscat::run_acceptance(opts, std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::cout << (failed == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << " ("
              << results.size() - failed << "/" << results.size() << " criteria)\n";
    return failed == 0 ? 0 : 1;
}
