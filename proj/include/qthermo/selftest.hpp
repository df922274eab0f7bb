#pragma once

#include <string>
#include <vector>

namespace qthermo {

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Fast invariant corpus over the physics modules. Deterministic.
std::vector<SelftestCheck> run_selftest();

}  // namespace qthermo
