#include "rislab/randomness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace rislab {
namespace {

double igamc(double a, double x) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(a, x);
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

TestReport make(std::string name, double stat, double p, std::size_t n, double alpha) {
    TestReport r;
    r.test_name = std::move(name);
    r.statistic = stat;
    r.p_value = clamp01(p);
    r.pass = r.p_value >= alpha;
    r.n_bits = n;
    return r;
}

TestReport inapplicable(std::string name, std::size_t n) {
    TestReport r;
    r.test_name = std::move(name);
    r.n_bits = n;
    r.applicable = false;
    return r;
}

}  // namespace

TestReport monobit(std::span<const std::uint8_t> bits, double alpha) {
    const std::size_t n = bits.size();
    if (n == 0) throw std::domain_error("monobit: empty input");
    long s = 0;
    for (auto b : bits) s += b ? 1 : -1;
    const double s_obs = std::abs(static_cast<double>(s)) / std::sqrt(static_cast<double>(n));
    return make("monobit", s_obs, std::erfc(s_obs / std::numbers::sqrt2), n, alpha);
}

TestReport block_frequency(std::span<const std::uint8_t> bits, std::size_t M, double alpha) {
    const std::size_t n = bits.size();
    if (M == 0) throw std::domain_error("block_frequency: M must be positive");
    if (n < M || n < 100) return inapplicable("block_frequency", n);
    const std::size_t blocks = n / M;
    double chi = 0.0;
    for (std::size_t i = 0; i < blocks; ++i) {
        std::size_t ones = 0;
        for (std::size_t j = 0; j < M; ++j) ones += bits[i * M + j] ? 1 : 0;
        const double pi = static_cast<double>(ones) / static_cast<double>(M);
        chi += (pi - 0.5) * (pi - 0.5);
    }
    chi *= 4.0 * static_cast<double>(M);
    return make("block_frequency", chi, igamc(static_cast<double>(blocks) / 2.0, chi / 2.0), n, alpha);
}

TestReport runs(std::span<const std::uint8_t> bits, double alpha) {
    const std::size_t n = bits.size();
    if (n < 2) return inapplicable("runs", n);
    std::size_t ones = 0;
    for (auto b : bits) ones += b ? 1 : 0;
    const double dn = static_cast<double>(n);
    const double pi = static_cast<double>(ones) / dn;
    // frequency prerequisite; failing it means the runs test is failed outright
    if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(dn)) return make("runs", 0.0, 0.0, n, alpha);
    std::size_t v = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) v += (bits[k] != 0) != (bits[k + 1] != 0);
    const double num = std::abs(static_cast<double>(v) - 2.0 * dn * pi * (1.0 - pi));
    const double den = 2.0 * std::sqrt(2.0 * dn) * pi * (1.0 - pi);
    return make("runs", static_cast<double>(v), std::erfc(num / den), n, alpha);
}

TestReport longest_run(std::span<const std::uint8_t> bits, double alpha) {
    constexpr std::size_t M = 8;
    constexpr double pi[4] = {0.2148, 0.3672, 0.2305, 0.1875};
    const std::size_t n = bits.size();
    if (n < 128) return inapplicable("longest_run", n);
    const std::size_t blocks = n / M;
    double v[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < blocks; ++i) {
        int run = 0;
        int best = 0;
        for (std::size_t j = 0; j < M; ++j) {
            run = bits[i * M + j] ? run + 1 : 0;
            best = std::max(best, run);
        }
        const int cls = best <= 1 ? 0 : best >= 4 ? 3 : best - 1;
        v[cls] += 1.0;
    }
    double chi = 0.0;
    const double N = static_cast<double>(blocks);
    for (int i = 0; i < 4; ++i) chi += (v[i] - N * pi[i]) * (v[i] - N * pi[i]) / (N * pi[i]);
    return make("longest_run", chi, igamc(1.5, chi / 2.0), n, alpha);
}

std::vector<TestReport> cumulative_sums(std::span<const std::uint8_t> bits, double alpha) {
    const std::size_t n = bits.size();
    if (n < 100) return {inapplicable("cusum_forward", n), inapplicable("cusum_backward", n)};
    const double dn = static_cast<double>(n);
    auto phi = [](double x) { return boost::math::cdf(boost::math::normal(), x); };
    auto pvalue = [&](double z) {
        const double sq = std::sqrt(dn);
        double sum1 = 0.0;
        for (long k = static_cast<long>(std::floor((-dn / z + 1) / 4));
             k <= static_cast<long>(std::floor((dn / z - 1) / 4)); ++k)
            sum1 += phi((4 * k + 1) * z / sq) - phi((4 * k - 1) * z / sq);
        double sum2 = 0.0;
        for (long k = static_cast<long>(std::floor((-dn / z - 3) / 4));
             k <= static_cast<long>(std::floor((dn / z - 1) / 4)); ++k)
            sum2 += phi((4 * k + 3) * z / sq) - phi((4 * k + 1) * z / sq);
        return 1.0 - sum1 + sum2;
    };
    std::vector<TestReport> out;
    for (int mode = 0; mode < 2; ++mode) {
        long s = 0;
        long z = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t idx = mode == 0 ? i : n - 1 - i;
            s += bits[idx] ? 1 : -1;
            z = std::max(z, std::abs(s));
        }
        const double zd = static_cast<double>(z);
        const double p = z == 0 ? 1.0 : pvalue(zd);
        out.push_back(make(mode == 0 ? "cusum_forward" : "cusum_backward", zd, p, n, alpha));
    }
    return out;
}

TestReport approximate_entropy(std::span<const std::uint8_t> bits, int m, double alpha) {
    const std::size_t n = bits.size();
    if (m < 1) throw std::domain_error("approximate_entropy: m must be >= 1");
    if (n < (std::size_t{1} << (m + 5))) return inapplicable("approximate_entropy", n);
    auto phi = [&](int len) {
        std::vector<std::size_t> counts(std::size_t{1} << len, 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t v = 0;
            for (int j = 0; j < len; ++j) v = (v << 1) | (bits[(i + static_cast<std::size_t>(j)) % n] ? 1U : 0U);
            ++counts[v];
        }
        double acc = 0.0;
        for (auto c : counts)
            if (c > 0) {
                const double p = static_cast<double>(c) / static_cast<double>(n);
                acc += p * std::log(p);
            }
        return acc;
    };
    const double apen = phi(m) - phi(m + 1);
    const double chi = 2.0 * static_cast<double>(n) * (std::numbers::ln2 - apen);
    return make("approximate_entropy", chi, igamc(std::pow(2.0, m - 1), chi / 2.0), n, alpha);
}

SuiteResult suite(std::span<const std::uint8_t> bits, double alpha) {
    if (bits.empty()) throw std::domain_error("suite: empty input");
    std::vector<TestReport> all;
    all.push_back(monobit(bits, alpha));
    all.push_back(block_frequency(bits, 128, alpha));
    all.push_back(runs(bits, alpha));
    all.push_back(longest_run(bits, alpha));
    for (auto& r : cumulative_sums(bits, alpha)) all.push_back(std::move(r));
    all.push_back(approximate_entropy(bits, 2, alpha));
    SuiteResult out;
    std::size_t passed = 0;
    for (auto& r : all)
        if (r.applicable) {
            passed += r.pass ? 1 : 0;
            out.reports.push_back(std::move(r));
        }
    out.pass_fraction = out.reports.empty() ? 0.0 : static_cast<double>(passed) / static_cast<double>(out.reports.size());
    return out;
}

}  // namespace rislab
