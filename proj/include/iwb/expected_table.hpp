#pragma once

// Expected invariants of the twisted signed series at p = 3. Any mismatch
// against these values is a failure; they are never regenerated from output.

#include <array>
#include <string>

namespace iwb {

struct ExpectedRow {
    const char* curve;
    long D;
    long p;
    long lambda_plus;
    const char* slopes_plus;
    long lambda_minus;
    const char* slopes_minus;
};

inline constexpr std::array<ExpectedRow, 6> kExpectedTable{{
    {"32a", -43, 3, 8, "{(2:1/2),(6:1/6)}", 2, "{(2:1)}"},
    {"32a", -107, 3, 2, "{(2:1)}", 6, "{(2:1/2),(4:1/4)}"},
    {"32a", -283, 3, 6, "{(2:1/2),(4:1/4)}", 2, "{(2:1)}"},
    {"40a1", -331, 3, 6, "{(2:1/2),(4:1/4)}", 2, "{(2:1)}"},
    {"56a1", -139, 3, 6, "{(2:1/2),(4:1/4)}", 2, "{(2:1)}"},
    {"56a1", -487, 3, 6, "{(2:1/2),(4:1/4)}", 2, "{(2:1)}"},
}};

inline const ExpectedRow* find_expected(const std::string& curve, long D, long p) {
    for (const auto& r : kExpectedTable)
        if (curve == r.curve && D == r.D && p == r.p) return &r;
    return nullptr;
}

}  // namespace iwb
