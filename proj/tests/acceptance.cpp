// Acceptance suite: runs the full verification battery and prints one
// pass/fail line per criterion. Exits nonzero if anything fails.

#include "frontspread/verify.hpp"

#include <iostream>

int main() {
    using namespace frontspread;
    const std::vector<CheckResult> results = run_verification(VerifyLevel::Full, &std::cout);
    bool all_pass = true;
    for (const auto &r : results)
        all_pass = all_pass && r.pass;
    std::cout << (all_pass ? "acceptance: all criteria passed\n"
                           : "acceptance: FAILURES present\n");
    return all_pass ? 0 : 1;
}
