#include <doctest.h>

#include <cmath>

#include "rislab/randomness.hpp"
#include "rislab/rng.hpp"

using namespace rislab;

namespace {

std::vector<std::uint8_t> bits_of(const char* s) {
    std::vector<std::uint8_t> b;
    for (; *s; ++s) b.push_back(static_cast<std::uint8_t>(*s - '0'));
    return b;
}

std::vector<std::uint8_t> random_bits(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::uint8_t> b(n);
    for (std::size_t i = 0; i < n; i += 64) {
        const std::uint64_t w = rng.bits();
        for (std::size_t j = 0; j < 64 && i + j < n; ++j) b[i + j] = static_cast<std::uint8_t>((w >> j) & 1U);
    }
    return b;
}

std::vector<TestReport> everything(std::span<const std::uint8_t> b) {
    std::vector<TestReport> out{monobit(b), block_frequency(b), runs(b), longest_run(b), approximate_entropy(b)};
    for (auto& r : cumulative_sums(b)) out.push_back(r);
    return out;
}

}  // namespace

TEST_SUITE("randomness") {

TEST_CASE("monobit examples") {
    std::vector<std::uint8_t> alt(100);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = static_cast<std::uint8_t>(i & 1U);
    CHECK(monobit(alt).p_value == doctest::Approx(1.0));

    const TestReport ones = monobit(std::vector<std::uint8_t>(100, 1));
    CHECK(ones.statistic == doctest::Approx(10.0));
    CHECK(ones.p_value == doctest::Approx(std::erfc(10.0 / std::sqrt(2.0))));
    CHECK(ones.p_value == doctest::Approx(1.5e-23).epsilon(0.05));
    CHECK_FALSE(ones.pass);

    const TestReport ex = monobit(bits_of("1011010101"));
    CHECK(ex.statistic == doctest::Approx(0.632455532).epsilon(1e-6));
    CHECK(ex.p_value == doctest::Approx(0.527089).epsilon(1e-5));
    CHECK(ex.pass);
    CHECK_THROWS_AS(monobit(std::vector<std::uint8_t>{}), std::domain_error);
}

TEST_CASE("runs example") {
    const TestReport r = runs(bits_of("1001101011"));
    CHECK(r.statistic == 7.0);
    CHECK(r.p_value == doctest::Approx(0.147232).epsilon(1e-5));
    CHECK(r.pass);
}

TEST_CASE("SP 800-22 longer worked examples") {
    // 100-bit example used for block frequency (M = 10), cusum and runs
    const auto e = bits_of(
        "1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000");
    CHECK(block_frequency(e, 10).p_value == doctest::Approx(0.706438).epsilon(1e-5));
    CHECK(runs(e).p_value == doctest::Approx(0.500798).epsilon(1e-5));
    CHECK(monobit(e).p_value == doctest::Approx(0.109599).epsilon(1e-5));
    const auto cs = cumulative_sums(e);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].p_value == doctest::Approx(0.219194).epsilon(1e-5));
    CHECK(cs[1].p_value == doctest::Approx(0.114866).epsilon(1e-5));
    CHECK(approximate_entropy(e, 2).applicable == false);

    // 128-bit example for the longest run of ones (M = 8)
    const auto l = bits_of(
        "11001100000101010110110001001100111000000000001001001101010100010001001111010110100000001101011111001100111001101101100010110010");
    CHECK(longest_run(l).p_value == doctest::Approx(0.180609).epsilon(1e-5));
}

TEST_CASE("all zeros fail every applicable test") {
    const std::vector<std::uint8_t> z(1000, 0);
    CHECK(block_frequency(z).p_value < 1e-10);
    CHECK_FALSE(block_frequency(z).pass);
    const SuiteResult s = suite(z);
    CHECK_FALSE(s.reports.empty());
    for (const auto& r : s.reports) CHECK_FALSE(r.pass);
    CHECK(s.pass_fraction == 0.0);
}

TEST_CASE("approximate entropy rejects a long alternating sequence") {
    std::vector<std::uint8_t> alt(10000);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = static_cast<std::uint8_t>(i & 1U);
    const TestReport r = approximate_entropy(alt, 2);
    CHECK(r.p_value < 1e-10);
    CHECK_FALSE(r.pass);
}

TEST_CASE("suite reports only applicable tests") {
    CHECK(suite(random_bits(10, 1)).reports.size() == 2);  // monobit, runs
    CHECK(suite(random_bits(100, 1)).reports.size() == 4);  // + cusum x2
    CHECK(suite(random_bits(1000, 1)).reports.size() == 7);
    for (std::size_t n : {10u, 100u, 1000u}) {
        const SuiteResult s = suite(random_bits(n, 2));
        std::size_t applicable = 0;
        for (const auto& r : everything(random_bits(n, 2))) applicable += r.applicable;
        CHECK(s.reports.size() == applicable);
    }
}

TEST_CASE("pseudorandom bits pass monobit and runs in at least 96 of 100 trials") {
    int passed = 0;
    int whole_suite = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        const auto b = random_bits(100000, 1000 + t);
        passed += monobit(b).pass && runs(b).pass;
        whole_suite += suite(b).pass_fraction == 1.0;
    }
    CHECK(passed >= 96);
    // seven tests at 1% each: about 93 expected
    CHECK(whole_suite >= 85);
}

TEST_CASE("p-values lie in [0, 1]; pass iff p >= significance") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto b = random_bits(50 + 97 * seed, seed);
        for (const auto& r : everything(b)) {
            if (!r.applicable) continue;
            CHECK(r.p_value >= 0.0);
            CHECK(r.p_value <= 1.0);
            CHECK(r.pass == (r.p_value >= kDefaultSignificance));
        }
    }
    for (const auto& r : everything(std::vector<std::uint8_t>(300, 1))) {
        if (!r.applicable) continue;
        CHECK(r.p_value >= 0.0);
        CHECK(r.p_value <= 1.0);
    }
}

TEST_CASE("complement invariance and determinism") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto b = random_bits(500, seed);
        auto c = b;
        for (auto& x : c) x ^= 1U;
        CHECK(monobit(b).p_value == doctest::Approx(monobit(c).p_value).epsilon(1e-12));
        CHECK(runs(b).p_value == doctest::Approx(runs(c).p_value).epsilon(1e-12));
        CHECK(suite(b).pass_fraction == suite(b).pass_fraction);
        CHECK(runs(b).p_value == runs(b).p_value);
    }
}

TEST_CASE("runs prerequisite") {
    // 90% ones fails the frequency prerequisite; runs reports p = 0
    std::vector<std::uint8_t> b(200, 1);
    for (std::size_t i = 0; i < 20; ++i) b[i * 10] = 0;
    const TestReport r = runs(b);
    CHECK(r.p_value == 0.0);
    CHECK_FALSE(r.pass);
}

}
