#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hsurf {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail; // measured values and tolerances
    double runtime_seconds = 0.0;
};

struct AcceptanceOptions {
    bool quick = false;          // reduced resolutions, widened tolerances
    std::uint64_t seed = 20240817;
};

/// Runs every acceptance criterion and returns one result per criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// One pass/fail line per criterion; returns the number of failures.
int print_acceptance(std::ostream& out, const std::vector<CriterionResult>& results);

} // namespace hsurf
