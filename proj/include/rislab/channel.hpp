#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rislab/rng.hpp"

namespace rislab {

using ComplexGain = std::complex<double>;
using ChannelVector = std::vector<ComplexGain>;

constexpr double kSpeedOfLight = 299792458.0;

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

double distance(Point a, Point b);

struct RisGeometry {
    int rows = 8;
    int cols = 32;
    int rows_per_group = 2;
    int phase_levels = 16;
    double unit_size_m = 0.012;

    int units() const { return rows * cols; }
    int groups() const { return rows / rows_per_group; }
    void validate() const;
    bool operator==(const RisGeometry&) const = default;
};

struct ReflectionState {
    std::vector<int> group_phase_index;
    bool operator==(const ReflectionState&) const = default;
};

// Per-frame AR-1 correlation for "static room" runs. Residual drift of a few
// percent of the channel variance per 1e5 frames; see README for the calibration.
constexpr double kDefaultStaticRho = 0.999999;

struct FadingParams {
    double rho = kDefaultStaticRho;
    int direct_taps = 4;
    double carrier_hz = 4.25e9;
    double pathloss_exponent = 2.0;
    double reference_distance_m = 1.0;
    double static_rho = kDefaultStaticRho;
    // delay (in samples) of the RIS cascade tap; must not collide with a direct tap
    int ris_delay_taps = 4;

    void validate() const;
    bool operator==(const FadingParams&) const = default;
};

struct NodeLayout {
    Point alice{-0.75, 0.5};
    Point bob{0.75, 0.5};
    Point ris{0.0, 0.0};
    Point eve{0.0, 1.1614378277661477};

    void validate() const;
    bool operator==(const NodeLayout&) const = default;
};

// Stationary per-element variances; evolve_channels needs them to keep the
// process stationary.
struct LinkVariances {
    double ar = 0.0;
    double rb = 0.0;
    double re = 0.0;
    double ab_tap = 0.0;
    double ae = 0.0;
    double be = 0.0;
    bool operator==(const LinkVariances&) const = default;
};

struct ChannelSnapshot {
    ChannelVector h_AR;
    ChannelVector h_RB;
    ChannelVector h_RE;
    std::vector<ComplexGain> h_AB_taps;
    ComplexGain h_AE{};
    ComplexGain h_BE{};
    double time_s = 0.0;
    LinkVariances variance;

    bool operator==(const ChannelSnapshot&) const = default;
};

enum class Link { AB, BA, AE, BE };

double path_loss_db(double distance_m, double carrier_hz, double exponent,
                    double reference_distance_m);

// linear power gain 10^(-PL/10)
double path_gain(double distance_m, const FadingParams& params);

ChannelSnapshot sample_initial_channels(const NodeLayout& layout, const RisGeometry& geom,
                                        const FadingParams& params, Rng& rng);

ChannelSnapshot evolve_channels(const ChannelSnapshot& snapshot, double rho, Rng& rng);
void evolve_in_place(ChannelSnapshot& snapshot, double rho, Rng& rng);

ChannelVector reflection_coefficients(const ReflectionState& state, const RisGeometry& geom);

// Σ_u h_rx[u]·φ[u]·h_tx[u] for the link; coefficients are per unit
ComplexGain ris_cascade(const ChannelSnapshot& snapshot, std::span<const ComplexGain> coeffs,
                        Link link);

// Direct component at DC (sum of taps for the Alice-Bob link).
ComplexGain direct_component(const ChannelSnapshot& snapshot, Link link);

// Narrowband effective channel: RIS cascade plus direct component.
ComplexGain effective_channel(const ChannelSnapshot& snapshot, const ReflectionState& state,
                              const RisGeometry& geom, Link link);

ReflectionState random_reflection(const RisGeometry& geom, Rng& rng);

// Precomputed delay ramps e^{-j2πkd/K} for the frequency-selective response.
class SubcarrierBasis {
public:
    SubcarrierBasis(int subcarriers, int max_delay);

    int subcarriers() const { return k_; }
    std::span<const ComplexGain> ramp(int delay) const;

private:
    int k_;
    int max_delay_;
    std::vector<ComplexGain> table_;
};

// H_k = Σ_l tap_l e^{-j2πkl/K} + cascade·e^{-j2πkτ/K}. Eve's direct links are
// flat (one tap at delay 0). Writes `basis.subcarriers()` values into `out`.
void frequency_response(const ChannelSnapshot& snapshot, ComplexGain cascade, Link link,
                        int ris_delay_taps, const SubcarrierBasis& basis,
                        std::span<ComplexGain> out);

// state == nullptr means no RIS in the room
std::vector<ComplexGain> frequency_response(const ChannelSnapshot& snapshot,
                                            const ReflectionState* state, const RisGeometry& geom,
                                            Link link,
                                            int ris_delay_taps, const SubcarrierBasis& basis);

}  // namespace rislab
