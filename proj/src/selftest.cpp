#include "rislab/selftest.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "rislab/config.hpp"
#include "rislab/experiments.hpp"
#include "rislab/report.hpp"

namespace rislab {

namespace {

SelfTestResult hamming_exhaustive() {
    const BlockCodeSpec code = hamming74();
    int ok = 0;
    int total = 0;
    // the 16 codewords are the 7-bit words with zero syndrome
    for (int w = 0; w < 128; ++w) {
        Bits word(7);
        for (int i = 0; i < 7; ++i) word[i] = static_cast<std::uint8_t>((w >> i) & 1);
        const Bits s = syndrome(word, code);
        if (std::any_of(s.begin(), s.end(), [](auto b) { return b != 0; })) continue;
        for (int flip = -1; flip < 7; ++flip) {
            Bits bob = word;
            if (flip >= 0) bob[flip] ^= 1U;
            const auto fixed = reconcile_block(bob, s, code);
            ++total;
            ok += fixed && *fixed == word;
        }
    }
    return {"hamming74 exhaustive", ok == 128 && total == 128, fmt::format("{}/{}", ok, total)};
}

SelfTestResult bch_random() {
    const BlockCodeSpec code = bch127_64();
    Rng rng(7);
    int ok = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        Bits a(127);
        for (auto& b : a) b = static_cast<std::uint8_t>(rng.bits() & 1U);
        Bits bob = a;
        const int w = rng.uniform_int(0, code.t);
        std::vector<int> pos(127);
        for (int i = 0; i < 127; ++i) pos[i] = i;
        for (int i = 0; i < w; ++i) {
            std::swap(pos[i], pos[rng.uniform_int(i, 126)]);
            bob[pos[i]] ^= 1U;
        }
        const auto fixed = reconcile_block(bob, syndrome(a, code), code);
        ok += fixed && *fixed == a;
    }
    return {"bch127_64 random <= t errors", ok == trials, fmt::format("{}/{}", ok, trials)};
}

SelfTestResult noiseless_ls() {
    FrameConfig fc;
    fc.noise_floor_dbm = -INFINITY;
    fc.rx_gain_std_db = 0.0;
    Rng rng(11);
    const auto known = known_pilots(fc);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        std::vector<ComplexGain> h(static_cast<std::size_t>(fc.subcarriers));
        for (auto& x : h) x = rng.complex_normal(1e-6);
        const ReceivedFrame rx = transmit_frame(h, fc, rng);
        const auto est = ls_estimate(rx.pilots, known);
        for (std::size_t p = 0; p < est.size(); ++p) {
            const ComplexGain truth = h[p * static_cast<std::size_t>(fc.pilot_spacing)];
            worst = std::max(worst, std::abs(est[p] - truth) / std::abs(truth));
        }
    }
    return {"noiseless LS estimate", worst < 1e-12, fmt::format("max relative error {:.3g}", worst)};
}

SelfTestResult double_threshold_example() {
    const std::vector<double> col{5, -5, 0, 5, -5};
    const ThresholdBits r = double_threshold_quantize(col, 0.2);
    const bool ok = r.bits == Bits{1, 0, 1, 0} && r.retained == std::vector<std::size_t>{0, 1, 3, 4};
    return {"double threshold example", ok, ""};
}

SelfTestResult randomness_examples() {
    const Bits a{1, 0, 1, 1, 0, 1, 0, 1, 0, 1};
    const Bits b{1, 0, 0, 1, 1, 0, 1, 0, 1, 1};
    const double pm = monobit(a).p_value;
    const double pr = runs(b).p_value;
    const bool ok = std::abs(pm - 0.527089) < 1e-5 && std::abs(pr - 0.147232) < 1e-5;
    return {"monobit and runs worked examples", ok, fmt::format("monobit p={:.6f} runs p={:.6f}", pm, pr)};
}

SelfTestResult leakage_example() {
    const std::size_t m = leakage_budget(70, hamming74(), 10, 8);
    return {"leakage budget", m == 32, fmt::format("m={}", m)};
}

SelfTestResult preset_round_trip() {
    int ok = 0;
    const auto presets = scenario_presets();
    for (const auto& c : presets) ok += parse_config_string(to_config_string(c)) == c;
    return {"preset config round trip", ok == static_cast<int>(presets.size()),
            fmt::format("{}/{}", ok, presets.size())};
}

SelfTestResult small_run_deterministic() {
    ScenarioConfig c = *find_preset("DATA2");
    c.n_frames = 3000;
    const std::string a = report_to_json(run_scenario(c), c).dump();
    const std::string b = report_to_json(run_scenario(c), c).dump();
    return {"deterministic rerun", a == b, fmt::format("{} bytes", a.size())};
}

SelfTestResult small_run_agreement() {
    ScenarioConfig c = *find_preset("DATA2");
    c.n_frames = 3000;
    const MetricsReport r = run_scenario(c);
    const bool ok = r.final_keys_agree && r.kgr_final <= r.kgr_raw + 1e-12 &&
                    r.leakage_bits == r.transcript_bits.at("syndrome") +
                                          r.transcript_bits.at("confirmation_hash");
    return {"final keys agree, leakage matches transcript", ok, summary_line(r)};
}

}  // namespace

std::vector<SelfTestResult> run_selftest() {
    return {hamming_exhaustive(), bch_random(),         noiseless_ls(),          double_threshold_example(),
            randomness_examples(), leakage_example(),   preset_round_trip(),     small_run_deterministic(),
            small_run_agreement()};
}

}  // namespace rislab
