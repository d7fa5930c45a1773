#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace rislab {

// Independent sub-streams of one scenario seed. Keeping them apart means two
// scenarios that share a seed draw the same room, the same noise and the same
// RIS states frame by frame (common random numbers).
enum class Stream : std::uint64_t {
    environment = 1,
    evolution = 2,
    noise = 3,
    legit_schedule = 4,
    attacker_schedule = 5,
    public_channel = 6,
    receiver_gain = 7,
    eve_guess = 8,
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

inline std::uint64_t derive_seed(std::uint64_t seed, Stream s) {
    return mix_seed(seed, static_cast<std::uint64_t>(s));
}

class Rng {
public:
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return eng_(); }

    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double normal() { return normal_(eng_); }

    // circularly-symmetric complex Gaussian with E|z|^2 = variance
    std::complex<double> complex_normal(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal_(eng_);
        const double im = normal_(eng_);
        return {s * re, s * im};
    }

    double uniform() { return boost::random::uniform_01<double>()(eng_); }

    int uniform_int(int lo, int hi) {
        return boost::random::uniform_int_distribution<int>(lo, hi)(eng_);
    }

    std::uint64_t bits() { return eng_(); }

private:
    boost::random::mt19937_64 eng_;
    boost::random::normal_distribution<double> normal_;
};

}  // namespace rislab
