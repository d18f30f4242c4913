// Acceptance suite: runs every criterion at its stated tolerance and
// prints one pass/fail line per criterion.  Nonzero exit on any failure.

#include <cstring>
#include <iostream>

#include "hsurf/acceptance.hpp"

int main(int argc, char** argv) {
    hsurf::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) opts.quick = true;
        else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
            opts.seed = std::strtoull(argv[++i], nullptr, 10);
        else {
            std::cerr << "usage: acceptance [--quick] [--seed N]\n";
            return 2;
        }
    }
    const auto results = hsurf::run_acceptance(opts);
    const int failures = hsurf::print_acceptance(std::cout, results);
    return failures == 0 ? 0 : 1;
}
