#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rislab/channel.hpp"
#include "rislab/rng.hpp"

namespace rislab {

struct FrameConfig {
    double frame_period_s = 0.010;
    int subcarriers = 1200;
    int pilot_spacing = 6;
    int data_bits = 1200;
    double probe_gap_s = 0.005;
    double tx_power_dbm = 0.0;
    // -inf selects noiseless mode
    double noise_floor_dbm = -79.0;
    // slow receiver gain instability (AR-1 in dB), independent per receiver
    double rx_gain_std_db = 0.5;
    double rx_gain_coherence_s = 5.0;

    int pilots() const { return subcarriers / pilot_spacing; }
    // noise power relative to a unit-power transmit symbol
    double noise_variance() const;
    void validate() const;
    bool operator==(const FrameConfig&) const = default;
};

enum class Direction { AtoB, BtoA, AtoE, BtoE };

const char* to_string(Direction d);

struct ProbeObservation {
    std::int64_t frame_index = 0;
    Direction direction = Direction::AtoB;
    std::vector<ComplexGain> csi_estimate;
    double rss_db = 0.0;
    double time_s = 0.0;
};

enum class ScheduleOwner { legitimate, attacker };

// RIS control sequence. State k is a pure function of (seed, k), so the
// sequence is unbounded and random access costs one small RNG draw.
class RisSchedule {
public:
    RisSchedule(double switch_period_s, std::uint64_t seed, ScheduleOwner owner, RisGeometry geom);

    double switch_period_s() const { return period_; }
    ScheduleOwner owner() const { return owner_; }
    const RisGeometry& geometry() const { return geom_; }

    std::int64_t index_at(double time_s) const;
    ReflectionState state(std::int64_t index) const;

private:
    double period_;
    std::uint64_t seed_;
    ScheduleOwner owner_;
    RisGeometry geom_;
};

ReflectionState active_state(const RisSchedule& schedule, double time_s);

struct ReceivedFrame {
    std::vector<ComplexGain> pilots;
    std::vector<ComplexGain> data;
};

std::vector<ComplexGain> known_pilots(const FrameConfig& config);

ReceivedFrame transmit_frame(std::span<const ComplexGain> channel_response,
                             const FrameConfig& config, Rng& rng);
void transmit_frame(std::span<const ComplexGain> channel_response, const FrameConfig& config,
                    Rng& rng, ReceivedFrame& out);

std::vector<ComplexGain> ls_estimate(std::span<const ComplexGain> received_pilots,
                                     std::span<const ComplexGain> known);

double rss_from_data(std::span<const ComplexGain> samples);

struct ProbeRound {
    ProbeObservation at_A;          // Bob's downlink probe seen by Alice
    ProbeObservation at_B;          // Alice's uplink probe seen by Bob
    ProbeObservation eve_uplink;    // Alice's probe seen by Eve
    ProbeObservation eve_downlink;  // Bob's probe seen by Eve
};

struct EnvironmentSpec {
    NodeLayout layout;
    RisGeometry geometry;
    FadingParams fading;
    FrameConfig frame;
    std::optional<double> legit_switch_period_s;
    std::optional<double> attacker_switch_period_s;
    std::uint64_t seed = 1;
    // Eve's copy of Alice's probe is not used by the key pipeline; runs that
    // do not export traces may skip it
    bool observe_eve_uplink = true;
};

class ProbingEnvironment {
public:
    explicit ProbingEnvironment(const EnvironmentSpec& spec);

    // Frames must be requested in nondecreasing order; skipped frames are
    // bridged by one exact AR-1 step.
    ProbeRound probing_round(std::int64_t frame_index);

    const ChannelSnapshot& snapshot() const { return snap_; }
    std::optional<ReflectionState> ris_state_at(double time_s) const;

private:
    void advance_to(double time_s);
    ComplexGain cascade_at(double time_s, Link link) const;
    ProbeObservation observe(Link link, Direction dir, int receiver, std::int64_t frame, double t);

    EnvironmentSpec spec_;
    ChannelSnapshot snap_;
    std::optional<RisSchedule> active_;
    SubcarrierBasis basis_;
    Rng evolution_rng_;
    Rng noise_rng_;
    Rng gain_rng_;
    double gain_db_[3] = {0.0, 0.0, 0.0};
    double gain_time_s_ = 0.0;
    std::vector<ComplexGain> response_;
    std::vector<ComplexGain> pilots_;
    ReceivedFrame rx_;
};

}  // namespace rislab
