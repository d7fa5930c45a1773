#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rislab {

constexpr double kDefaultSignificance = 0.01;

struct TestReport {
    std::string test_name;
    double statistic = 0.0;
    double p_value = 0.0;
    bool pass = false;
    std::size_t n_bits = 0;
    // false when the input is shorter than the test's minimum length
    bool applicable = true;
};

TestReport monobit(std::span<const std::uint8_t> bits, double significance = kDefaultSignificance);
TestReport block_frequency(std::span<const std::uint8_t> bits, std::size_t M = 128,
                           double significance = kDefaultSignificance);
TestReport runs(std::span<const std::uint8_t> bits, double significance = kDefaultSignificance);
TestReport longest_run(std::span<const std::uint8_t> bits, double significance = kDefaultSignificance);
// forward and backward modes
std::vector<TestReport> cumulative_sums(std::span<const std::uint8_t> bits,
                                        double significance = kDefaultSignificance);
TestReport approximate_entropy(std::span<const std::uint8_t> bits, int m = 2,
                               double significance = kDefaultSignificance);

struct SuiteResult {
    std::vector<TestReport> reports;  // applicable tests only
    double pass_fraction = 0.0;
};

SuiteResult suite(std::span<const std::uint8_t> bits, double significance = kDefaultSignificance);

}  // namespace rislab
