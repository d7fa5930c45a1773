#include <doctest.h>

#include <cmath>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>

#include "rislab/channel.hpp"

using namespace rislab;

namespace {

RisGeometry tiny_geom(int units, int levels = 16) {
    RisGeometry g;
    g.rows = units;
    g.cols = 1;
    g.rows_per_group = 1;
    g.phase_levels = levels;
    return g;
}

ChannelSnapshot one_unit_snapshot(ComplexGain ar, ComplexGain rb, ComplexGain direct) {
    ChannelSnapshot s;
    s.h_AR = {ar};
    s.h_RB = {rb};
    s.h_RE = {0.0};
    s.h_AB_taps = {direct};
    return s;
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("path loss") {
    const double pl1 = path_loss_db(1.0, 4.25e9, 2.0, 1.0);
    CHECK(pl1 == doctest::Approx(20.0 * std::log10(4.0 * M_PI * 4.25e9 / kSpeedOfLight)));
    CHECK(pl1 == doctest::Approx(45.0).epsilon(0.001));
    // doubling the distance at exponent 2
    CHECK(path_loss_db(2.0, 4.25e9, 2.0, 1.0) - pl1 == doctest::Approx(20.0 * std::log10(2.0)));
    CHECK(path_loss_db(3.0, 4.25e9, 2.0, 1.0) - path_loss_db(1.5, 4.25e9, 2.0, 1.0) ==
          doctest::Approx(6.0206).epsilon(1e-4));
    CHECK_THROWS_AS(path_loss_db(0.0, 4.25e9, 2.0, 1.0), std::domain_error);
}

TEST_CASE("initial channels are deterministic per seed") {
    NodeLayout l;
    RisGeometry g;
    FadingParams p;
    Rng a(5), b(5), c(6);
    const auto s1 = sample_initial_channels(l, g, p, a);
    const auto s2 = sample_initial_channels(l, g, p, b);
    const auto s3 = sample_initial_channels(l, g, p, c);
    CHECK(s1 == s2);
    CHECK_FALSE(s1 == s3);
}

TEST_CASE("direct link variance follows path loss") {
    NodeLayout l;
    const RisGeometry g = tiny_geom(1);
    FadingParams p;
    Rng rng(42);
    double acc = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) acc += std::norm(direct_component(sample_initial_channels(l, g, p, rng), Link::AB));
    const double expected = path_gain(distance(l.alice, l.bob), p);
    CHECK(acc / draws == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("farther Eve gets less power") {
    NodeLayout l;
    l.eve = {0.0, 4.0};
    const RisGeometry g = tiny_geom(1);
    FadingParams p;
    Rng rng(1);
    const auto s = sample_initial_channels(l, g, p, rng);
    CHECK(s.variance.ae < s.variance.ab_tap * p.direct_taps);
    CHECK(s.variance.be < s.variance.ab_tap * p.direct_taps);
}

TEST_CASE("evolution: rho = 1 keeps the snapshot, rho = 0 forgets it") {
    NodeLayout l;
    const RisGeometry g = tiny_geom(4);
    FadingParams p;
    Rng rng(3);
    const auto s = sample_initial_channels(l, g, p, rng);
    auto same = evolve_channels(s, 1.0, rng);
    same.time_s = s.time_s;
    CHECK(same == s);
    CHECK_THROWS_AS(evolve_channels(s, 1.5, rng), std::domain_error);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto a = sample_initial_channels(l, g, p, rng);
        const auto b = evolve_channels(a, 0.0, rng);
        const ComplexGain x = a.h_AB_taps[0];
        const ComplexGain y = b.h_AB_taps[0];
        sxy += (x * std::conj(y)).real();
        sxx += std::norm(x);
        syy += std::norm(y);
    }
    CHECK(std::abs(sxy / std::sqrt(sxx * syy)) < 0.05);
}

TEST_CASE("evolution preserves the stationary variance") {
    NodeLayout l;
    const RisGeometry g = tiny_geom(8);
    FadingParams p;
    Rng rng(9);
    auto s = sample_initial_channels(l, g, p, rng);
    double acc = 0.0;
    ComplexGain mean{};
    std::size_t n = 0;
    for (int step = 0; step < 100000; ++step) {
        evolve_in_place(s, 0.5, rng);
        for (const auto& h : s.h_AR) {
            acc += std::norm(h);
            mean += h;
            ++n;
        }
    }
    CHECK(acc / static_cast<double>(n) == doctest::Approx(s.variance.ar).epsilon(0.02));
    CHECK(std::abs(mean / static_cast<double>(n)) < 0.02 * std::sqrt(s.variance.ar));
}

TEST_CASE("reflection coefficients") {
    RisGeometry g;
    ReflectionState zero{std::vector<int>(static_cast<std::size_t>(g.groups()), 0)};
    for (const auto& c : reflection_coefficients(zero, g)) CHECK(c == ComplexGain(1.0, 0.0));

    RisGeometry two = g;
    two.phase_levels = 2;
    ReflectionState one{std::vector<int>(static_cast<std::size_t>(g.groups()), 1)};
    for (const auto& c : reflection_coefficients(one, two)) {
        CHECK(c.real() == doctest::Approx(-1.0));
        CHECK(std::abs(c.imag()) < 1e-15);
    }

    Rng rng(4);
    for (int i = 0; i < 20; ++i)
        for (const auto& c : reflection_coefficients(random_reflection(g, rng), g))
            CHECK(std::abs(c) == doctest::Approx(1.0).epsilon(1e-15));

    ReflectionState bad{{0, 0, 0, 16}};
    CHECK_THROWS_AS(reflection_coefficients(bad, g), std::domain_error);
    ReflectionState short_state{{0}};
    CHECK_THROWS_AS(reflection_coefficients(short_state, g), std::domain_error);

    // units of one group share the group's coefficient
    ReflectionState mixed{{0, 4, 8, 12}};
    const auto coeffs = reflection_coefficients(mixed, g);
    const int per_group = g.rows_per_group * g.cols;
    for (int u = 0; u < g.units(); ++u)
        CHECK(coeffs[static_cast<std::size_t>(u)] == coeffs[static_cast<std::size_t>((u / per_group) * per_group)]);
}

TEST_CASE("effective channel degenerate cases") {
    const RisGeometry g = tiny_geom(1);
    const ReflectionState zero{{0}};
    CHECK(effective_channel(one_unit_snapshot(1.0, 1.0, 0.0), zero, g, Link::AB) == ComplexGain(1.0, 0.0));
    const ComplexGain d(0.3, -0.2);
    CHECK(effective_channel(one_unit_snapshot(0.0, 0.0, d), zero, g, Link::AB) == d);
    CHECK(effective_channel(one_unit_snapshot(0.0, 0.0, d), zero, g, Link::BA) == d);
}

TEST_CASE("reciprocity is bit-exact") {
    NodeLayout l;
    RisGeometry g;
    FadingParams p;
    Rng rng(77);
    for (int i = 0; i < 50; ++i) {
        const auto s = sample_initial_channels(l, g, p, rng);
        const auto st = random_reflection(g, rng);
        CHECK(effective_channel(s, st, g, Link::AB) == effective_channel(s, st, g, Link::BA));
        const SubcarrierBasis basis(1200, p.ris_delay_taps);
        CHECK(frequency_response(s, &st, g, Link::AB, p.ris_delay_taps, basis) ==
              frequency_response(s, &st, g, Link::BA, p.ris_delay_taps, basis));
    }
}

TEST_CASE("cascade is linear in the reflection coefficients") {
    NodeLayout l;
    RisGeometry g;
    FadingParams p;
    Rng rng(8);
    const auto s = sample_initial_channels(l, g, p, rng);
    const auto c1 = reflection_coefficients(random_reflection(g, rng), g);
    const auto c2 = reflection_coefficients(random_reflection(g, rng), g);
    ChannelVector sum(c1.size());
    for (std::size_t i = 0; i < c1.size(); ++i) sum[i] = c1[i] + c2[i];
    const ComplexGain lhs = ris_cascade(s, c1, Link::AB) + ris_cascade(s, c2, Link::AB);
    const ComplexGain rhs = ris_cascade(s, sum, Link::AB);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
}

TEST_CASE("co-phased reflection adds to the direct link") {
    const RisGeometry g = tiny_geom(4);
    ChannelSnapshot s;
    s.h_AR = {0.2, 0.1, 0.3, 0.05};
    s.h_RB = {0.4, 0.2, 0.1, 0.3};
    s.h_RE = std::vector<ComplexGain>(4);
    s.h_AB_taps = {0.5};
    const ReflectionState zero{{0, 0, 0, 0}};
    CHECK(std::abs(effective_channel(s, zero, g, Link::AB)) >= std::abs(direct_component(s, Link::AB)));
}

TEST_CASE("random reflection") {
    const RisGeometry one = tiny_geom(4, 1);
    Rng rng(2);
    for (int i = 0; i < 10; ++i)
        CHECK(random_reflection(one, rng).group_phase_index == std::vector<int>(4, 0));

    RisGeometry g;
    Rng a(99), b(99);
    CHECK(random_reflection(g, a) == random_reflection(g, b));

    std::vector<double> counts(static_cast<std::size_t>(g.phase_levels), 0.0);
    Rng r(123);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) counts[static_cast<std::size_t>(random_reflection(g, r).group_phase_index[0])] += 1;
    const double expect = static_cast<double>(draws) / g.phase_levels;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - expect) * (c - expect) / expect;
    const boost::math::chi_squared dist(g.phase_levels - 1);
    CHECK(boost::math::cdf(boost::math::complement(dist, chi2)) > 0.01);
}

}
