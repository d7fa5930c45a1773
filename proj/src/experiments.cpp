#include "rislab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rislab/errors.hpp"

namespace rislab {

const char* to_string(CodeChoice c) { return c == CodeChoice::hamming74 ? "hamming74" : "bch127_64"; }

BlockCodeSpec make_code(CodeChoice c) {
    // both codes are immutable once built; share one instance
    static const BlockCodeSpec bch = bch127_64();
    static const BlockCodeSpec ham = hamming74();
    return c == CodeChoice::hamming74 ? ham : bch;
}

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
    throw ConfigError(ConfigErrorKind::invalid_value, key, key + ": " + why);
}

void check_point(const std::string& key, Point p) {
    if (!std::isfinite(p.x)) bad(key + "_x", "must be finite");
    if (!std::isfinite(p.y)) bad(key + "_y", "must be finite");
}

}  // namespace

void ScenarioConfig::validate() const {
    if (name.empty()) bad("scenario.name", "must not be empty");
    if (n_frames < 1) bad("scenario.n_frames", "must be >= 1");
    if (decimation < 1) bad("scenario.decimation", "must be >= 1");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) bad("scenario.alpha", "must be finite and >= 0");
    if (stats_block_frames < 0 || stats_block_frames == 1)
        bad("scenario.stats_block_frames", "must be 0 (whole run) or >= 2");
    if (safety_bits < 0) bad("scenario.safety_bits", "must be >= 0");
    if (pa_batch_blocks < 1) bad("scenario.pa_batch_blocks", "must be >= 1");
    if (!(significance > 0.0 && significance < 1.0)) bad("scenario.significance", "must lie in (0, 1)");
    if (!std::isfinite(magnitude_floor_db)) bad("scenario.magnitude_floor_db", "must be finite");

    check_point("layout.alice", layout.alice);
    check_point("layout.bob", layout.bob);
    check_point("layout.ris", layout.ris);
    check_point("layout.eve", layout.eve);
    try {
        layout.validate();
    } catch (const std::domain_error& e) {
        bad("layout", e.what());
    }

    if (geometry.rows <= 0) bad("geometry.rows", "must be positive");
    if (geometry.cols <= 0) bad("geometry.cols", "must be positive");
    if (geometry.rows_per_group <= 0 || geometry.rows % geometry.rows_per_group != 0)
        bad("geometry.rows_per_group", "must divide rows");
    if (geometry.phase_levels < 1) bad("geometry.phase_levels", "must be >= 1");
    if (!(geometry.unit_size_m > 0.0)) bad("geometry.unit_size_m", "must be positive");

    if (!(fading.rho >= 0.0 && fading.rho <= 1.0)) bad("fading.rho", "must lie in [0, 1]");
    if (!(fading.static_rho >= 0.0 && fading.static_rho <= 1.0)) bad("fading.static_rho", "must lie in [0, 1]");
    if (fading.direct_taps < 1) bad("fading.direct_taps", "must be >= 1");
    if (!(fading.carrier_hz > 0.0)) bad("fading.carrier_hz", "must be positive");
    if (!std::isfinite(fading.pathloss_exponent)) bad("fading.pathloss_exponent", "must be finite");
    if (!(fading.reference_distance_m > 0.0)) bad("fading.reference_distance_m", "must be positive");
    if (fading.ris_delay_taps < fading.direct_taps)
        bad("fading.ris_delay_taps", "must be >= direct_taps (distinct from every direct tap)");
    if (fading.ris_delay_taps >= frame.subcarriers) bad("fading.ris_delay_taps", "must be < subcarriers");

    if (!(frame.frame_period_s > 0.0)) bad("frame.frame_period_s", "must be positive");
    if (frame.subcarriers <= 0) bad("frame.subcarriers", "must be positive");
    if (frame.pilot_spacing <= 0 || frame.subcarriers % frame.pilot_spacing != 0)
        bad("frame.pilot_spacing", "must divide subcarriers");
    if (frame.data_bits < 1 || frame.data_bits > frame.subcarriers)
        bad("frame.data_bits", "must lie in [1, subcarriers]");
    if (!(frame.probe_gap_s > 0.0 && frame.probe_gap_s < frame.frame_period_s))
        bad("frame.probe_gap_s", "must lie in (0, frame_period_s)");
    if (!std::isfinite(frame.tx_power_dbm)) bad("frame.tx_power_dbm", "must be finite");
    if (std::isnan(frame.noise_floor_dbm) || frame.noise_floor_dbm == INFINITY)
        bad("frame.noise_floor_dbm", "must be finite or -inf");
    if (!(frame.rx_gain_std_db >= 0.0) || !std::isfinite(frame.rx_gain_std_db))
        bad("frame.rx_gain_std_db", "must be finite and >= 0");
    if (!(frame.rx_gain_coherence_s > 0.0)) bad("frame.rx_gain_coherence_s", "must be positive");

    if (legit_switch_period_s && !(*legit_switch_period_s > 0.0))
        bad("legit_schedule.switch_period_s", "must be positive");
    if (attacker_switch_period_s && !(*attacker_switch_period_s > 0.0))
        bad("attacker_schedule.switch_period_s", "must be positive");
    if (legit_switch_period_s && attacker_switch_period_s)
        bad("attacker_schedule.switch_period_s", "only one RIS schedule may be configured");
}

EnvironmentSpec ScenarioConfig::environment() const {
    EnvironmentSpec e;
    e.layout = layout;
    e.geometry = geometry;
    e.fading = fading;
    e.frame = frame;
    e.legit_switch_period_s = legit_switch_period_s;
    e.attacker_switch_period_s = attacker_switch_period_s;
    e.seed = seed;
    return e;
}

Trace simulate(const ScenarioConfig& c, const RoundObserver& observer) {
    c.validate();
    EnvironmentSpec spec = c.environment();
    spec.observe_eve_uplink = static_cast<bool>(observer);
    ProbingEnvironment env(spec);
    Trace t;
    const auto frames = static_cast<std::size_t>(c.processed_frames());
    const auto pilots = static_cast<std::size_t>(c.frame.pilots());
    for (PartyFeatures* p : {&t.alice, &t.bob, &t.eve}) {
        p->csi.values.reserve(frames * pilots);
        p->rss.values.reserve(frames);
    }
    const double fl = c.magnitude_floor_db;
    for (std::int64_t f = 0; f < c.n_frames; f += c.decimation) {
        const ProbeRound r = env.probing_round(f);
        if (observer) observer(r);
        append_features(t.alice.csi, r.at_A, fl);
        append_features(t.alice.rss, r.at_A, fl);
        append_features(t.bob.csi, r.at_B, fl);
        append_features(t.bob.rss, r.at_B, fl);
        append_features(t.eve.csi, r.eve_downlink, fl);
        append_features(t.eve.rss, r.eve_downlink, fl);
        ++t.frames;
    }
    return t;
}

namespace {

double h2(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double csi_fluctuation(const FeatureSeries& s) {
    if (s.rows < 2 || s.cols == 0) return 0.0;
    double acc = 0.0;
    for (std::size_t c = 0; c < s.cols; ++c) {
        double m = 0.0;
        for (std::size_t r = 0; r < s.rows; ++r) m += s.at(r, c);
        m /= static_cast<double>(s.rows);
        double v = 0.0;
        for (std::size_t r = 0; r < s.rows; ++r) v += (s.at(r, c) - m) * (s.at(r, c) - m);
        acc += std::sqrt(v / static_cast<double>(s.rows));
    }
    return acc / static_cast<double>(s.cols);
}

}  // namespace

MarkovStats markov_stats(const BitMaterial& a, const BitMaterial& b) {
    if (a.bits.size() != b.bits.size() || a.bits.size() != a.origin_index.size())
        throw std::domain_error("markov_stats: inconsistent bit material");
    std::size_t dims = 0;
    for (const auto& o : a.origin_index) dims = std::max(dims, o.dim + 1);
    std::vector<int> last(dims, -1);
    double n[2][2][2] = {};  // [prev a][a][b]
    double total = 0.0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
        const std::size_t d = a.origin_index[i].dim;
        const int x = a.bits[i] ? 1 : 0;
        const int y = b.bits[i] ? 1 : 0;
        if (last[d] >= 0) {
            n[last[d]][x][y] += 1.0;
            total += 1.0;
        }
        last[d] = x;
    }
    MarkovStats out;
    if (total == 0.0) return out;
    for (int p = 0; p < 2; ++p) {
        double np = 0.0;
        double nx[2] = {0.0, 0.0};
        double ny[2] = {0.0, 0.0};
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                np += n[p][x][y];
                nx[x] += n[p][x][y];
                ny[y] += n[p][x][y];
            }
        if (np == 0.0) continue;
        const double w = np / total;
        out.entropy += w * h2(nx[1] / np);
        double mi = 0.0;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                if (n[p][x][y] > 0.0) mi += n[p][x][y] / np * std::log2(n[p][x][y] * np / (nx[x] * ny[y]));
        out.mutual_info += w * std::max(mi, 0.0);
    }
    return out;
}

EveReport eve_metrics(const PublicView& view, const ScenarioConfig& c,
                      const FeatureSeries* eve_features, const Bits& bob_raw,
                      const Bits& alice_final, std::uint64_t guess_seed) {
    EveReport rep;
    Bits guess;
    if (eve_features != nullptr) {
        const QuantizedSeries q = quantize_series(*eve_features, c.quantizer, c.alpha,
                                                  static_cast<std::size_t>(c.stats_block_frames));
        guess = gather_bits(q, view.common_indices).bits;
    } else {
        Rng g(guess_seed);
        guess.resize(view.common_indices.size());
        for (auto& b : guess) b = static_cast<std::uint8_t>(g.bits() & 1U);
    }
    rep.raw_bits = guess.size();
    if (!guess.empty() && guess.size() == bob_raw.size()) rep.eve_bdr = bit_disagreement_rate(guess, bob_raw);
    if (view.interleaver_seed) {
        const auto perm = interleaver(guess.size(), *view.interleaver_seed);
        Bits shuffled(guess.size());
        for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = guess[perm[i]];
        guess = std::move(shuffled);
    }

    const BlockCodeSpec code = make_code(c.code);
    const auto n = static_cast<std::size_t>(code.n);
    std::vector<Bits> blocks(view.blocks.size());
    for (std::size_t b = 0; b < view.blocks.size() && (b + 1) * n <= guess.size(); ++b) {
        const std::span<const std::uint8_t> mine(guess.data() + b * n, n);
        auto fixed = reconcile_block(mine, view.blocks[b].syndrome_A, code);
        blocks[b] = fixed ? std::move(*fixed) : Bits(mine.begin(), mine.end());
    }
    Bits eve_final;
    for (const auto& batch : view.batches) {
        Bits in;
        for (std::size_t b : batch.blocks) in.insert(in.end(), blocks[b].begin(), blocks[b].end());
        if (in.size() != batch.seed.first_row.size()) continue;
        const Bits k = privacy_amplify(in, batch.seed, batch.m);
        eve_final.insert(eve_final.end(), k.begin(), k.end());
    }
    rep.final_bits = eve_final.size();
    if (!alice_final.empty() && eve_final.size() == alice_final.size())
        rep.final_match_fraction = 1.0 - bit_disagreement_rate(eve_final, alice_final);
    return rep;
}

MetricsReport evaluate(const ScenarioConfig& c, const Trace& t) {
    c.validate();
    MetricsReport rep;
    rep.scenario = c.name;
    rep.seed = c.seed;
    rep.feature_mode = c.feature_mode;
    rep.quantizer = c.quantizer;

    const FeatureSeries& fa = t.alice.get(c.feature_mode);
    const FeatureSeries& fb = t.bob.get(c.feature_mode);
    const auto block = static_cast<std::size_t>(c.stats_block_frames);
    const QuantizedSeries qa = quantize_series(fa, c.quantizer, c.alpha, block);
    const QuantizedSeries qb = quantize_series(fb, c.quantizer, c.alpha, block);

    Transcript tr;
    if (c.quantizer == Quantizer::double_threshold) {
        // each party announces its kept cells as a bitmap
        tr.add(PublicKind::retained_indices, fa.rows * fa.cols);
        tr.add(PublicKind::retained_indices, fb.rows * fb.cols);
    }
    const std::vector<std::size_t> common = index_reconcile(qa.retained, qb.retained);
    const BitMaterial ka = gather_bits(qa, common);
    const BitMaterial kb = gather_bits(qb, common);

    const double frames = static_cast<double>(std::max<std::size_t>(t.frames, 1));
    StageCounts& n = rep.counts;
    n.frames_processed = t.frames;
    n.bits_attempted = fa.rows * fa.cols;
    n.retained_A = qa.retained.size();
    n.retained_B = qb.retained.size();
    n.common_bits = common.size();
    for (std::size_t i = 0; i < common.size(); ++i) n.matched_bits += ka.bits[i] == kb.bits[i];

    rep.bdr_raw = common.empty() ? 0.0 : bit_disagreement_rate(ka.bits, kb.bits);
    const MarkovStats ms = markov_stats(ka, kb);
    rep.mutual_info_per_bit = ms.mutual_info;
    rep.entropy_per_bit = ms.entropy;
    rep.matched_bits_per_frame = static_cast<double>(n.matched_bits) / frames;
    rep.kgr_raw = static_cast<double>(common.size()) * ms.mutual_info / frames;

    const BlockCodeSpec code = make_code(c.code);
    AgreementOptions opt;
    opt.safety_bits = static_cast<std::size_t>(c.safety_bits);
    opt.batch_blocks = static_cast<std::size_t>(c.pa_batch_blocks);
    opt.secret_fraction = ms.mutual_info;
    Rng pub(derive_seed(c.seed, Stream::public_channel));
    const KeyAgreement ag = agree_keys(ka.bits, kb.bits, code, opt, pub, tr);

    n.blocks_total = ag.blocks.size();
    n.blocks_confirmed = ag.blocks.size() - ag.blocks_failed;
    n.final_bits = ag.final_A.size();
    rep.kgr_final = static_cast<double>(ag.final_A.size()) / frames;
    rep.reconciliation_failure_rate =
        ag.blocks.empty() ? 0.0 : static_cast<double>(ag.blocks_failed) / static_cast<double>(ag.blocks.size());
    rep.leakage_bits = ag.leakage_bits;
    rep.final_keys_agree = ag.final_A == ag.final_B;
    if (!ag.final_A.empty()) rep.randomness = suite(ag.final_A, c.significance);

    for (const auto& item : tr.items) rep.transcript_bits[to_string(item.kind)] += item.bits;
    rep.transcript_bits["total"] = tr.total_bits();

    PublicView view{common, ag.interleaver_seed, ag.blocks, ag.batches};
    const EveReport eve = eve_metrics(view, c, &t.eve.get(c.feature_mode), kb.bits, ag.final_A,
                                      derive_seed(c.seed, Stream::eve_guess));
    rep.eve_bdr = eve.eve_bdr;
    rep.eve_final_match = eve.final_match_fraction;
    rep.csi_fluctuation_db = csi_fluctuation(t.alice.csi);
    return rep;
}

MetricsReport run_scenario(const ScenarioConfig& c) { return evaluate(c, simulate(c)); }

Point equidistant_point(Point a, Point b, Point away_from, double d) {
    const Point mid{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
    const double half = distance(a, b) / 2.0;
    if (!(d > half)) throw std::domain_error("equidistant_point: distance too small");
    const double h = std::sqrt(d * d - half * half);
    double nx = -(b.y - a.y) / (2.0 * half);
    double ny = (b.x - a.x) / (2.0 * half);
    if (nx * (away_from.x - mid.x) + ny * (away_from.y - mid.y) > 0.0) {
        nx = -nx;
        ny = -ny;
    }
    return {mid.x + h * nx, mid.y + h * ny};
}

namespace {

NodeLayout reciprocity_layout() {
    NodeLayout l;
    l.alice = {-0.75, 0.5};
    l.bob = {0.75, 0.5};
    l.ris = {0.0, 0.0};
    l.eve = equidistant_point(l.alice, l.bob, l.ris, 1.0);
    return l;
}

// Alice 0.5 m from the RIS; Bob at `bob_ris_m` on the same horizontal line.
NodeLayout deployment_layout(double bob_ris_m) {
    NodeLayout l;
    l.ris = {0.0, 0.0};
    l.alice = {-0.3, 0.4};
    l.bob = {std::sqrt(bob_ris_m * bob_ris_m - 0.16), 0.4};
    l.eve = equidistant_point(l.alice, l.bob, l.ris, 1.0);
    return l;
}

ScenarioConfig preset(const std::string& name, NodeLayout layout, std::int64_t n_frames,
                      std::int64_t decimation) {
    ScenarioConfig c;
    c.name = name;
    c.layout = layout;
    c.fading.rho = c.fading.static_rho;
    c.n_frames = n_frames;
    c.decimation = decimation;
    return c;
}

}  // namespace

std::vector<ScenarioConfig> scenario_presets() {
    std::vector<ScenarioConfig> out;
    out.push_back(preset("DATA1", reciprocity_layout(), 20000, 1));
    out.push_back(preset("DATA2", reciprocity_layout(), 200000, 10));
    out.back().legit_switch_period_s = 0.1;
    out.push_back(preset("DATA3", reciprocity_layout(), 2000000, 100));
    out.back().legit_switch_period_s = 1.0;
    const double dist[3] = {0.5, 1.0, 1.5};
    for (int i = 0; i < 3; ++i) {
        out.push_back(preset("DATA" + std::to_string(4 + i), deployment_layout(dist[i]), 200000, 10));
        out.back().legit_switch_period_s = 0.1;
    }
    for (int i = 0; i < 3; ++i) {
        out.push_back(preset("DATA" + std::to_string(7 + i), deployment_layout(dist[i]), 200000, 10));
        out.back().attacker_switch_period_s = 0.001;
    }
    return out;
}

std::optional<ScenarioConfig> find_preset(const std::string& name) {
    for (auto& c : scenario_presets())
        if (c.name == name) return c;
    return std::nullopt;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& c : scenario_presets()) out.push_back(c.name);
    return out;
}

std::vector<std::string> sweep_axes() {
    return {"switch_period_s", "bob_ris_distance_m", "alpha",           "tx_power_dbm",
            "noise_floor_dbm", "rho",                "rx_gain_std_db", "n_frames",
            "decimation",      "direct_taps",        "seed"};
}

void apply_axis(ScenarioConfig& c, const std::string& axis, double v) {
    if (axis == "switch_period_s") {
        if (c.attacker_switch_period_s) c.attacker_switch_period_s = v;
        else c.legit_switch_period_s = v;
    } else if (axis == "bob_ris_distance_m") {
        const double dy = c.layout.bob.y - c.layout.ris.y;
        if (!(v > std::abs(dy))) throw std::domain_error("sweep: bob_ris_distance_m shorter than Bob's height");
        c.layout.bob.x = c.layout.ris.x + std::sqrt(v * v - dy * dy);
    } else if (axis == "alpha") {
        c.alpha = v;
    } else if (axis == "tx_power_dbm") {
        c.frame.tx_power_dbm = v;
    } else if (axis == "noise_floor_dbm") {
        c.frame.noise_floor_dbm = v;
    } else if (axis == "rho") {
        c.fading.rho = v;
    } else if (axis == "rx_gain_std_db") {
        c.frame.rx_gain_std_db = v;
    } else if (axis == "n_frames") {
        c.n_frames = static_cast<std::int64_t>(std::llround(v));
    } else if (axis == "decimation") {
        c.decimation = static_cast<std::int64_t>(std::llround(v));
    } else if (axis == "direct_taps") {
        c.fading.direct_taps = static_cast<int>(std::lround(v));
    } else if (axis == "seed") {
        c.seed = static_cast<std::uint64_t>(std::llround(v));
    } else {
        throw std::domain_error("sweep: unknown axis '" + axis + "'");
    }
}

std::vector<SweepPoint> sweep(const ScenarioConfig& base, const std::string& axis,
                              const std::vector<double>& values, SeedPolicy policy) {
    std::vector<SweepPoint> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepPoint p;
        p.value = values[i];
        p.config = base;
        apply_axis(p.config, axis, values[i]);
        if (policy == SeedPolicy::derived && axis != "seed") p.config.seed = mix_seed(base.seed, 0x5eed0000ULL + i);
        p.report = run_scenario(p.config);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace rislab
