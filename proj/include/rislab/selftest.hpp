#pragma once

#include <string>
#include <vector>

namespace rislab {

struct SelfTestResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Fast invariant checks (a few seconds); used by `rislab selftest`.
std::vector<SelfTestResult> run_selftest();

}  // namespace rislab
