#include "rislab/probing.hpp"

#include <cmath>
#include <stdexcept>

namespace rislab {

double FrameConfig::noise_variance() const {
    if (std::isinf(noise_floor_dbm) && noise_floor_dbm < 0) return 0.0;
    return std::pow(10.0, (noise_floor_dbm - tx_power_dbm) / 10.0);
}

void FrameConfig::validate() const {
    if (!(frame_period_s > 0.0)) throw std::domain_error("frame: frame_period_s must be positive");
    if (subcarriers <= 0) throw std::domain_error("frame: subcarriers must be positive");
    if (pilot_spacing <= 0 || subcarriers % pilot_spacing != 0)
        throw std::domain_error("frame: subcarriers must be divisible by pilot_spacing");
    if (data_bits < 1 || data_bits > subcarriers)
        throw std::domain_error("frame: data_bits must lie in [1, subcarriers]");
    if (!(probe_gap_s > 0.0 && probe_gap_s < frame_period_s))
        throw std::domain_error("frame: probe_gap_s must lie in (0, frame_period_s)");
    if (!std::isfinite(tx_power_dbm)) throw std::domain_error("frame: tx_power_dbm must be finite");
    if (std::isnan(noise_floor_dbm) || noise_floor_dbm == INFINITY)
        throw std::domain_error("frame: noise_floor_dbm must be finite or -inf");
    if (!(rx_gain_std_db >= 0.0)) throw std::domain_error("frame: rx_gain_std_db must be >= 0");
    if (!(rx_gain_coherence_s > 0.0))
        throw std::domain_error("frame: rx_gain_coherence_s must be positive");
}

const char* to_string(Direction d) {
    switch (d) {
        case Direction::AtoB: return "A->B";
        case Direction::BtoA: return "B->A";
        case Direction::AtoE: return "A->E";
        case Direction::BtoE: return "B->E";
    }
    return "?";
}

RisSchedule::RisSchedule(double switch_period_s, std::uint64_t seed, ScheduleOwner owner,
                         RisGeometry geom)
    : period_(switch_period_s), seed_(seed), owner_(owner), geom_(geom) {
    if (!(switch_period_s > 0.0)) throw std::domain_error("RisSchedule: switch_period_s must be positive");
    geom_.validate();
}

std::int64_t RisSchedule::index_at(double time_s) const {
    if (!(time_s >= 0.0)) throw std::domain_error("active_state: time must be >= 0");
    // times are built as frame·period sums; the nudge keeps t = 0.3, T = 0.1 at index 3
    return static_cast<std::int64_t>(std::floor(time_s / period_ + 1e-9));
}

ReflectionState RisSchedule::state(std::int64_t index) const {
    Rng rng(mix_seed(seed_, static_cast<std::uint64_t>(index)));
    return random_reflection(geom_, rng);
}

ReflectionState active_state(const RisSchedule& schedule, double time_s) {
    return schedule.state(schedule.index_at(time_s));
}

std::vector<ComplexGain> known_pilots(const FrameConfig& config) {
    return std::vector<ComplexGain>(static_cast<std::size_t>(config.pilots()), ComplexGain{1.0, 0.0});
}

void transmit_frame(std::span<const ComplexGain> h, const FrameConfig& config, Rng& rng,
                    ReceivedFrame& out) {
    if (h.size() != static_cast<std::size_t>(config.subcarriers))
        throw std::domain_error("transmit_frame: channel response length != subcarriers");
    const double nv = config.noise_variance();
    const auto np = static_cast<std::size_t>(config.pilots());
    const auto nd = static_cast<std::size_t>(config.data_bits);
    const auto spacing = static_cast<std::size_t>(config.pilot_spacing);
    out.pilots.resize(np);
    out.data.resize(nd);
    for (std::size_t p = 0; p < np; ++p) out.pilots[p] = h[p * spacing];
    // BPSK data, one bit per subcarrier
    std::uint64_t word = 0;
    for (std::size_t k = 0; k < nd; ++k) {
        if (k % 64 == 0) word = rng.bits();
        out.data[k] = (word >> (k % 64)) & 1U ? h[k] : -h[k];
    }
    if (nv > 0.0) {
        for (auto& y : out.pilots) y += rng.complex_normal(nv);
        for (auto& y : out.data) y += rng.complex_normal(nv);
    }
}

ReceivedFrame transmit_frame(std::span<const ComplexGain> h, const FrameConfig& config, Rng& rng) {
    ReceivedFrame out;
    transmit_frame(h, config, rng, out);
    return out;
}

std::vector<ComplexGain> ls_estimate(std::span<const ComplexGain> received,
                                     std::span<const ComplexGain> known) {
    if (received.size() != known.size()) throw std::domain_error("ls_estimate: length mismatch");
    std::vector<ComplexGain> est(received.size());
    for (std::size_t i = 0; i < received.size(); ++i) {
        if (known[i] == ComplexGain{}) throw std::domain_error("ls_estimate: zero pilot");
        est[i] = received[i] / known[i];
    }
    return est;
}

double rss_from_data(std::span<const ComplexGain> samples) {
    if (samples.empty()) throw std::domain_error("rss_from_data: empty input");
    double acc = 0.0;
    for (const auto& s : samples) acc += std::norm(s);
    return 10.0 * std::log10(acc / static_cast<double>(samples.size()));
}

ProbingEnvironment::ProbingEnvironment(const EnvironmentSpec& spec)
    : spec_(spec),
      basis_(spec.frame.subcarriers, std::max(spec.fading.ris_delay_taps, spec.fading.direct_taps - 1)),
      evolution_rng_(derive_seed(spec.seed, Stream::evolution)),
      noise_rng_(derive_seed(spec.seed, Stream::noise)),
      gain_rng_(derive_seed(spec.seed, Stream::receiver_gain)) {
    spec_.frame.validate();
    if (spec_.legit_switch_period_s && spec_.attacker_switch_period_s)
        throw std::domain_error("environment: only one RIS schedule is supported");
    Rng env(derive_seed(spec.seed, Stream::environment));
    snap_ = sample_initial_channels(spec_.layout, spec_.geometry, spec_.fading, env);
    if (spec_.legit_switch_period_s)
        active_.emplace(*spec_.legit_switch_period_s, derive_seed(spec.seed, Stream::legit_schedule),
                        ScheduleOwner::legitimate, spec_.geometry);
    if (spec_.attacker_switch_period_s)
        active_.emplace(*spec_.attacker_switch_period_s,
                        derive_seed(spec.seed, Stream::attacker_schedule), ScheduleOwner::attacker,
                        spec_.geometry);
    if (spec_.frame.rx_gain_std_db > 0.0)
        for (double& g : gain_db_) g = spec_.frame.rx_gain_std_db * gain_rng_.normal();
    response_.resize(static_cast<std::size_t>(spec_.frame.subcarriers));
    pilots_ = known_pilots(spec_.frame);
}

std::optional<ReflectionState> ProbingEnvironment::ris_state_at(double time_s) const {
    if (!active_) return std::nullopt;
    return active_state(*active_, time_s);
}

void ProbingEnvironment::advance_to(double t) {
    const double dt = t - snap_.time_s;
    if (dt < -1e-12) throw std::logic_error("probing_round: frames must be nondecreasing in time");
    if (dt > 0.0) {
        const double rho = std::pow(spec_.fading.rho, dt / spec_.frame.frame_period_s);
        evolve_in_place(snap_, rho, evolution_rng_);
        snap_.time_s = t;
    }
    const double gdt = t - gain_time_s_;
    if (gdt > 0.0 && spec_.frame.rx_gain_std_db > 0.0) {
        const double r = std::exp(-gdt / spec_.frame.rx_gain_coherence_s);
        const double q = std::sqrt(1.0 - r * r) * spec_.frame.rx_gain_std_db;
        for (double& g : gain_db_) g = r * g + q * gain_rng_.normal();
    }
    gain_time_s_ = t;
}

ComplexGain ProbingEnvironment::cascade_at(double t, Link link) const {
    if (!active_) return {};
    const ChannelVector coeffs = reflection_coefficients(active_state(*active_, t), spec_.geometry);
    return ris_cascade(snap_, coeffs, link);
}

ProbeObservation ProbingEnvironment::observe(Link link, Direction dir, int receiver,
                                             std::int64_t frame, double t) {
    frequency_response(snap_, cascade_at(t, link), link, spec_.fading.ris_delay_taps, basis_, response_);
    transmit_frame(response_, spec_.frame, noise_rng_, rx_);
    if (spec_.frame.rx_gain_std_db > 0.0) {
        const double a = std::pow(10.0, gain_db_[receiver] / 20.0);
        for (auto& y : rx_.pilots) y *= a;
        for (auto& y : rx_.data) y *= a;
    }
    ProbeObservation obs;
    obs.frame_index = frame;
    obs.direction = dir;
    obs.csi_estimate = ls_estimate(rx_.pilots, pilots_);
    obs.rss_db = rss_from_data(rx_.data);
    obs.time_s = t;
    return obs;
}

ProbeRound ProbingEnvironment::probing_round(std::int64_t frame_index) {
    if (frame_index < 0) throw std::domain_error("probing_round: negative frame index");
    const double t0 = static_cast<double>(frame_index) * spec_.frame.frame_period_s;
    const double t1 = t0 + spec_.frame.probe_gap_s;
    ProbeRound r;
    advance_to(t0);
    r.at_B = observe(Link::AB, Direction::AtoB, 1, frame_index, t0);
    if (spec_.observe_eve_uplink) r.eve_uplink = observe(Link::AE, Direction::AtoE, 2, frame_index, t0);
    advance_to(t1);
    r.at_A = observe(Link::BA, Direction::BtoA, 0, frame_index, t1);
    r.eve_downlink = observe(Link::BE, Direction::BtoE, 2, frame_index, t1);
    return r;
}

}  // namespace rislab
