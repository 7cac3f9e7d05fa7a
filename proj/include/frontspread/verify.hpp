#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace frontspread {

enum class VerifyLevel { Quick, Full };

struct CheckResult {
    std::string id;
    std::string label;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

/// Runs the verification checks at the requested level, printing one
/// pass/fail line per check to `progress` as results arrive (pass nullptr to
/// stay silent). Quick covers the kernel/growth/spectral/recurrence
/// contracts; Full adds the long simulation checks.
std::vector<CheckResult> run_verification(VerifyLevel level, std::ostream *progress);

} // namespace frontspread
