#include "rislab/report.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "rislab/config.hpp"

namespace rislab {

using nlohmann::ordered_json;

ordered_json config_to_json(const ScenarioConfig& c) {
    ordered_json j = ordered_json::object();
    for (const auto& e : config_entries(c)) {
        double d = 0.0;
        const auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), d);
        const bool numeric = ec == std::errc() && p == e.value.data() + e.value.size() && std::isfinite(d);
        if (e.key == "seed") j[e.section][e.key] = c.seed;
        else if (numeric) j[e.section][e.key] = d;
        else j[e.section][e.key] = e.value;
    }
    return j;
}

ordered_json report_to_json(const MetricsReport& r, const ScenarioConfig& c) {
    ordered_json j;
    j["scenario"] = r.scenario;
    j["seed"] = r.seed;
    j["config"] = config_to_json(c);
    j["feature_mode"] = to_string(r.feature_mode);
    j["quantizer"] = to_string(r.quantizer);
    j["bdr_raw"] = r.bdr_raw;
    j["kgr_raw"] = r.kgr_raw;
    j["kgr_final"] = r.kgr_final;
    j["reconciliation_failure_rate"] = r.reconciliation_failure_rate;
    j["eve_bdr"] = r.eve_bdr;
    j["eve_final_match"] = r.eve_final_match;
    j["leakage_bits"] = r.leakage_bits;
    j["matched_bits_per_frame"] = r.matched_bits_per_frame;
    j["mutual_info_per_bit"] = r.mutual_info_per_bit;
    j["entropy_per_bit"] = r.entropy_per_bit;
    j["csi_fluctuation_proxy_db"] = r.csi_fluctuation_db;
    j["final_keys_agree"] = r.final_keys_agree;
    const StageCounts& n = r.counts;
    j["counts"] = {{"frames_processed", n.frames_processed}, {"bits_attempted", n.bits_attempted},
                   {"retained_A", n.retained_A},             {"retained_B", n.retained_B},
                   {"common_bits", n.common_bits},           {"matched_bits", n.matched_bits},
                   {"blocks_total", n.blocks_total},         {"blocks_confirmed", n.blocks_confirmed},
                   {"final_bits", n.final_bits}};
    ordered_json tr = ordered_json::object();
    for (const auto& [k, v] : r.transcript_bits) tr[k] = v;
    j["transcript_bits"] = tr;
    ordered_json tests = ordered_json::array();
    for (const auto& t : r.randomness.reports)
        tests.push_back({{"test", t.test_name}, {"statistic", t.statistic}, {"p_value", t.p_value},
                         {"pass", t.pass}, {"n_bits", t.n_bits}});
    j["randomness"] = {{"pass_fraction", r.randomness.pass_fraction}, {"tests", tests}};
    return j;
}

std::string csv_header() {
    return "scenario,seed,feature_mode,quantizer,bdr_raw,kgr_raw,kgr_final,eve_bdr,leakage_bits,"
           "nist_pass_fraction";
}

std::string csv_row(const MetricsReport& r) {
    return fmt::format("{},{},{},{},{},{},{},{},{},{}", r.scenario, r.seed, to_string(r.feature_mode),
                       to_string(r.quantizer), r.bdr_raw, r.kgr_raw, r.kgr_final, r.eve_bdr,
                       r.leakage_bits, r.randomness.pass_fraction);
}

std::string summary_line(const MetricsReport& r) {
    return fmt::format("{} seed={} bdr={:.4f} kgr_raw={:.3f} kgr_final={:.3f} eve_bdr={:.4f}", r.scenario,
                       r.seed, r.bdr_raw, r.kgr_raw, r.kgr_final, r.eve_bdr);
}

}  // namespace rislab
