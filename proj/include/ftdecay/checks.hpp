#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ftdecay::checks {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // worst observed deviation, or the failure reason
};

// Cross-module invariant suite: special functions, geometry, transforms,
// spherical averages, fits, lattice counts, body parsing. Every check is
// deterministic for a given seed. `quick` shrinks the sample counts.
std::vector<CheckResult> run_checks(bool quick = false, uint64_t seed = 2026);

}  // namespace ftdecay::checks
