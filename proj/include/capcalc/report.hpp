#pragma once

#include <string>
#include <vector>

namespace capcalc {

// One pass/fail line of a law suite, in canonical order.
struct SuiteLine {
    std::string name;
    bool pass = false;
    std::string note; // counterexample dump or short detail; empty when silent
};

inline bool all_pass(const std::vector<SuiteLine>& lines) {
    for (const auto& l : lines)
        if (!l.pass) return false;
    return true;
}

} // namespace capcalc
