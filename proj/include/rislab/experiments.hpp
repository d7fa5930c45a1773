#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rislab/channel.hpp"
#include "rislab/probing.hpp"
#include "rislab/quantize.hpp"
#include "rislab/randomness.hpp"
#include "rislab/reconcile.hpp"

namespace rislab {

enum class CodeChoice { bch127_64, hamming74 };

const char* to_string(CodeChoice c);
BlockCodeSpec make_code(CodeChoice c);

struct ScenarioConfig {
    std::string name = "custom";
    std::uint64_t seed = 1;
    NodeLayout layout;
    RisGeometry geometry;
    FadingParams fading;
    FrameConfig frame;
    std::optional<double> legit_switch_period_s;
    std::optional<double> attacker_switch_period_s;
    FeatureMode feature_mode = FeatureMode::csi;
    Quantizer quantizer = Quantizer::double_threshold;
    double alpha = 0.2;
    CodeChoice code = CodeChoice::bch127_64;
    std::int64_t n_frames = 20000;
    std::int64_t decimation = 1;
    std::int64_t stats_block_frames = 0;  // 0 = whole scenario
    std::int64_t safety_bits = 32;
    std::int64_t pa_batch_blocks = 8;
    double significance = kDefaultSignificance;
    double magnitude_floor_db = kMagnitudeFloorDb;

    // Throws ConfigError naming the offending key.
    void validate() const;
    EnvironmentSpec environment() const;
    std::int64_t processed_frames() const { return (n_frames + decimation - 1) / decimation; }

    bool operator==(const ScenarioConfig&) const = default;
};

struct PartyFeatures {
    FeatureSeries csi;
    FeatureSeries rss;

    PartyFeatures() { rss.mode = FeatureMode::rss; }

    const FeatureSeries& get(FeatureMode m) const { return m == FeatureMode::csi ? csi : rss; }
};

// Features of every processed frame; both modes are kept so one simulation
// serves all feature/quantizer combinations.
struct Trace {
    PartyFeatures alice;
    PartyFeatures bob;
    PartyFeatures eve;  // Eve's copy of Bob's probe
    std::size_t frames = 0;
};

using RoundObserver = std::function<void(const ProbeRound&)>;

Trace simulate(const ScenarioConfig& config, const RoundObserver& observer = {});

struct StageCounts {
    std::size_t frames_processed = 0;
    std::size_t bits_attempted = 0;
    std::size_t retained_A = 0;
    std::size_t retained_B = 0;
    std::size_t common_bits = 0;
    std::size_t matched_bits = 0;
    std::size_t blocks_total = 0;
    std::size_t blocks_confirmed = 0;
    std::size_t final_bits = 0;
};

struct EveReport {
    double eve_bdr = 0.5;
    double final_match_fraction = 0.5;
    std::size_t raw_bits = 0;
    std::size_t final_bits = 0;
};

struct MetricsReport {
    std::string scenario;
    std::uint64_t seed = 0;
    FeatureMode feature_mode = FeatureMode::csi;
    Quantizer quantizer = Quantizer::double_threshold;

    double bdr_raw = 0.0;
    double kgr_raw = 0.0;
    double kgr_final = 0.0;
    double reconciliation_failure_rate = 0.0;
    double eve_bdr = 0.5;
    double eve_final_match = 0.5;
    std::size_t leakage_bits = 0;

    double matched_bits_per_frame = 0.0;
    double mutual_info_per_bit = 0.0;
    double entropy_per_bit = 0.0;
    double csi_fluctuation_db = 0.0;  // proxy: mean over pilots of Alice's CSI dB std over frames
    bool final_keys_agree = true;

    StageCounts counts;
    std::map<std::string, std::size_t> transcript_bits;
    SuiteResult randomness;
};

// Everything Eve can read, plus the key material needed to score her.
struct PublicView {
    std::vector<std::size_t> common_indices;
    std::optional<std::uint64_t> interleaver_seed;
    std::vector<BlockRecord> blocks;
    std::vector<BatchRecord> batches;
};

// First-order Markov statistics of per-dimension bit sequences (consecutive
// retained bits of the same dimension): Î(A_t; B_t | A_{t-1}) and Ĥ(A_t | A_{t-1}).
struct MarkovStats {
    double mutual_info = 0.0;
    double entropy = 0.0;
};
MarkovStats markov_stats(const BitMaterial& a, const BitMaterial& b);

// Eve reruns quantization on her own features at the public indices, decodes
// with the public syndromes, amplifies with the public seeds. With no
// features she guesses uniformly. eve_bdr is measured against Bob's raw key,
// the party opposite the probe she mirrors.
EveReport eve_metrics(const PublicView& view, const ScenarioConfig& config,
                      const FeatureSeries* eve_features, const Bits& bob_raw,
                      const Bits& alice_final, std::uint64_t guess_seed);

MetricsReport evaluate(const ScenarioConfig& config, const Trace& trace);
MetricsReport run_scenario(const ScenarioConfig& config);

std::vector<ScenarioConfig> scenario_presets();
std::optional<ScenarioConfig> find_preset(const std::string& name);
std::vector<std::string> preset_names();

enum class SeedPolicy { derived, shared };

std::vector<std::string> sweep_axes();
// Sets a numeric field by axis name; unknown axis -> std::domain_error.
void apply_axis(ScenarioConfig& config, const std::string& axis, double value);

struct SweepPoint {
    double value = 0.0;
    ScenarioConfig config;
    MetricsReport report;
};

std::vector<SweepPoint> sweep(const ScenarioConfig& base, const std::string& axis,
                              const std::vector<double>& values,
                              SeedPolicy policy = SeedPolicy::derived);

// Point on the far side from the RIS at distance d from both parties.
Point equidistant_point(Point a, Point b, Point away_from, double d);

}  // namespace rislab
