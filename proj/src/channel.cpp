#include "rislab/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rislab {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

void RisGeometry::validate() const {
    if (rows <= 0 || cols <= 0) throw std::domain_error("ris geometry: rows and cols must be positive");
    if (rows_per_group <= 0 || rows % rows_per_group != 0)
        throw std::domain_error("ris geometry: rows must be divisible by rows_per_group");
    if (phase_levels < 1) throw std::domain_error("ris geometry: phase_levels must be >= 1");
    if (!(unit_size_m > 0.0)) throw std::domain_error("ris geometry: unit_size_m must be positive");
}

void FadingParams::validate() const {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::domain_error("fading: rho must lie in [0, 1]");
    if (!(static_rho >= 0.0 && static_rho <= 1.0))
        throw std::domain_error("fading: static_rho must lie in [0, 1]");
    if (direct_taps < 1) throw std::domain_error("fading: direct_taps must be >= 1");
    if (!(carrier_hz > 0.0)) throw std::domain_error("fading: carrier_hz must be positive");
    if (!(reference_distance_m > 0.0))
        throw std::domain_error("fading: reference_distance_m must be positive");
    if (!std::isfinite(pathloss_exponent)) throw std::domain_error("fading: bad pathloss_exponent");
    if (ris_delay_taps < direct_taps)
        throw std::domain_error("fading: ris_delay_taps must not overlap a direct tap");
}

void NodeLayout::validate() const {
    const Point pts[] = {alice, bob, ris, eve};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (!(distance(pts[i], pts[j]) > 0.0))
                throw std::domain_error("layout: node positions must be distinct");
}

double path_loss_db(double distance_m, double carrier_hz, double exponent,
                    double reference_distance_m) {
    if (!(distance_m > 0.0)) throw std::domain_error("path_loss_db: distance must be positive");
    if (!(carrier_hz > 0.0)) throw std::domain_error("path_loss_db: carrier must be positive");
    if (!(reference_distance_m > 0.0))
        throw std::domain_error("path_loss_db: reference distance must be positive");
    const double pl0 =
        20.0 * std::log10(4.0 * std::numbers::pi * reference_distance_m * carrier_hz / kSpeedOfLight);
    return pl0 + 10.0 * exponent * std::log10(distance_m / reference_distance_m);
}

double path_gain(double distance_m, const FadingParams& p) {
    return std::pow(10.0, -path_loss_db(distance_m, p.carrier_hz, p.pathloss_exponent,
                                        p.reference_distance_m) / 10.0);
}

namespace {

void fill(ChannelVector& v, std::size_t n, double var, Rng& rng) {
    v.resize(n);
    for (auto& g : v) g = rng.complex_normal(var);
}

void step(ComplexGain& g, double rho, double innov_scale, double var, Rng& rng) {
    g = rho * g + innov_scale * rng.complex_normal(var);
}

void step(ChannelVector& v, double rho, double innov_scale, double var, Rng& rng) {
    for (auto& g : v) step(g, rho, innov_scale, var, rng);
}

}  // namespace

ChannelSnapshot sample_initial_channels(const NodeLayout& layout, const RisGeometry& geom,
                                        const FadingParams& params, Rng& rng) {
    layout.validate();
    geom.validate();
    params.validate();

    ChannelSnapshot s;
    const auto n = static_cast<std::size_t>(geom.units());
    s.variance.ar = path_gain(distance(layout.alice, layout.ris), params);
    s.variance.rb = path_gain(distance(layout.ris, layout.bob), params);
    s.variance.re = path_gain(distance(layout.ris, layout.eve), params);
    // equal-power taps sharing the path-loss budget of the direct link
    s.variance.ab_tap = path_gain(distance(layout.alice, layout.bob), params) / params.direct_taps;
    s.variance.ae = path_gain(distance(layout.alice, layout.eve), params);
    s.variance.be = path_gain(distance(layout.bob, layout.eve), params);

    fill(s.h_AR, n, s.variance.ar, rng);
    fill(s.h_RB, n, s.variance.rb, rng);
    fill(s.h_RE, n, s.variance.re, rng);
    fill(s.h_AB_taps, static_cast<std::size_t>(params.direct_taps), s.variance.ab_tap, rng);
    s.h_AE = rng.complex_normal(s.variance.ae);
    s.h_BE = rng.complex_normal(s.variance.be);
    s.time_s = 0.0;
    return s;
}

void evolve_in_place(ChannelSnapshot& s, double rho, Rng& rng) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::domain_error("evolve_channels: rho must lie in [0, 1]");
    if (rho == 1.0) return;
    const double q = std::sqrt(1.0 - rho * rho);
    step(s.h_AR, rho, q, s.variance.ar, rng);
    step(s.h_RB, rho, q, s.variance.rb, rng);
    step(s.h_RE, rho, q, s.variance.re, rng);
    step(s.h_AB_taps, rho, q, s.variance.ab_tap, rng);
    step(s.h_AE, rho, q, s.variance.ae, rng);
    step(s.h_BE, rho, q, s.variance.be, rng);
}

ChannelSnapshot evolve_channels(const ChannelSnapshot& snapshot, double rho, Rng& rng) {
    ChannelSnapshot out = snapshot;
    evolve_in_place(out, rho, rng);
    return out;
}

ChannelVector reflection_coefficients(const ReflectionState& state, const RisGeometry& geom) {
    geom.validate();
    if (static_cast<int>(state.group_phase_index.size()) != geom.groups())
        throw std::domain_error("reflection_coefficients: state has wrong group count");
    const int per_group = geom.units() / geom.groups();
    ChannelVector out(static_cast<std::size_t>(geom.units()));
    for (int g = 0; g < geom.groups(); ++g) {
        const int idx = state.group_phase_index[static_cast<std::size_t>(g)];
        if (idx < 0 || idx >= geom.phase_levels)
            throw std::domain_error("reflection_coefficients: phase index out of range");
        ComplexGain c{1.0, 0.0};
        if (idx != 0) c = std::polar(1.0, 2.0 * std::numbers::pi * idx / geom.phase_levels);
        // exact values on the axes keep the 1-bit case free of rounding noise
        if (2 * idx == geom.phase_levels) c = {-1.0, 0.0};
        for (int u = 0; u < per_group; ++u) out[static_cast<std::size_t>(g * per_group + u)] = c;
    }
    return out;
}

ComplexGain ris_cascade(const ChannelSnapshot& s, std::span<const ComplexGain> coeffs, Link link) {
    const ChannelVector* tx = nullptr;
    const ChannelVector* rx = nullptr;
    switch (link) {
        // AB and BA take the identical expression, so reciprocity holds bit for bit
        case Link::AB:
        case Link::BA: tx = &s.h_AR; rx = &s.h_RB; break;
        case Link::AE: tx = &s.h_AR; rx = &s.h_RE; break;
        case Link::BE: tx = &s.h_RB; rx = &s.h_RE; break;
    }
    if (coeffs.size() != tx->size() || rx->size() != tx->size())
        throw std::domain_error("ris_cascade: dimension mismatch");
    ComplexGain acc{};
    for (std::size_t u = 0; u < coeffs.size(); ++u) acc += (*rx)[u] * (coeffs[u] * (*tx)[u]);
    return acc;
}

ComplexGain direct_component(const ChannelSnapshot& s, Link link) {
    switch (link) {
        case Link::AB:
        case Link::BA: {
            ComplexGain acc{};
            for (const auto& t : s.h_AB_taps) acc += t;
            return acc;
        }
        case Link::AE: return s.h_AE;
        case Link::BE: return s.h_BE;
    }
    return {};
}

ComplexGain effective_channel(const ChannelSnapshot& snapshot, const ReflectionState& state,
                              const RisGeometry& geom, Link link) {
    const ChannelVector coeffs = reflection_coefficients(state, geom);
    return ris_cascade(snapshot, coeffs, link) + direct_component(snapshot, link);
}

ReflectionState random_reflection(const RisGeometry& geom, Rng& rng) {
    geom.validate();
    ReflectionState st;
    st.group_phase_index.resize(static_cast<std::size_t>(geom.groups()));
    for (auto& g : st.group_phase_index)
        g = geom.phase_levels == 1 ? 0 : rng.uniform_int(0, geom.phase_levels - 1);
    return st;
}

SubcarrierBasis::SubcarrierBasis(int subcarriers, int max_delay)
    : k_(subcarriers), max_delay_(max_delay) {
    if (subcarriers <= 0 || max_delay < 0) throw std::domain_error("SubcarrierBasis: bad size");
    table_.resize(static_cast<std::size_t>(subcarriers) * static_cast<std::size_t>(max_delay + 1));
    for (int d = 0; d <= max_delay; ++d)
        for (int k = 0; k < subcarriers; ++k) {
            // reduce k·d mod K first so large delays keep full precision
            const long long r = (static_cast<long long>(k) * d) % subcarriers;
            table_[static_cast<std::size_t>(d) * subcarriers + k] =
                std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) / subcarriers);
        }
}

std::span<const ComplexGain> SubcarrierBasis::ramp(int delay) const {
    if (delay < 0 || delay > max_delay_) throw std::domain_error("SubcarrierBasis: delay out of range");
    return {table_.data() + static_cast<std::size_t>(delay) * k_, static_cast<std::size_t>(k_)};
}

void frequency_response(const ChannelSnapshot& s, ComplexGain cascade, Link link,
                        int ris_delay_taps, const SubcarrierBasis& basis,
                        std::span<ComplexGain> out) {
    const auto k = static_cast<std::size_t>(basis.subcarriers());
    if (out.size() != k) throw std::domain_error("frequency_response: output size mismatch");
    const auto ris = basis.ramp(ris_delay_taps);
    if (link == Link::AB || link == Link::BA) {
        const auto r0 = basis.ramp(0);
        for (std::size_t i = 0; i < k; ++i) out[i] = s.h_AB_taps[0] * r0[i] + cascade * ris[i];
        for (std::size_t l = 1; l < s.h_AB_taps.size(); ++l) {
            const auto r = basis.ramp(static_cast<int>(l));
            const ComplexGain t = s.h_AB_taps[l];
            for (std::size_t i = 0; i < k; ++i) out[i] += t * r[i];
        }
    } else {
        const ComplexGain d = link == Link::AE ? s.h_AE : s.h_BE;
        for (std::size_t i = 0; i < k; ++i) out[i] = d + cascade * ris[i];
    }
}

std::vector<ComplexGain> frequency_response(const ChannelSnapshot& s, const ReflectionState* state,
                                            const RisGeometry& geom, Link link, int ris_delay_taps,
                                            const SubcarrierBasis& basis) {
    ComplexGain cascade{};
    if (state != nullptr) cascade = ris_cascade(s, reflection_coefficients(*state, geom), link);
    std::vector<ComplexGain> out(static_cast<std::size_t>(basis.subcarriers()));
    frequency_response(s, cascade, link, ris_delay_taps, basis, out);
    return out;
}

}  // namespace rislab
