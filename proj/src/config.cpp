#include "rislab/config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace rislab {
namespace {

namespace pt = boost::property_tree;

[[noreturn]] void invalid(const std::string& key, const std::string& value, const char* what) {
    throw ConfigError(ConfigErrorKind::invalid_value, key,
                      fmt::format("{}: cannot read '{}' as {}", key, value, what));
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (v == "-inf") return -std::numeric_limits<double>::infinity();
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty()) invalid(key, v, "a number");
    return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    Int out{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty()) invalid(key, v, "an integer");
    return out;
}

std::string num(double v) { return fmt::format("{}", v); }

struct Field {
    std::string section;
    std::string key;
    std::function<std::string(const ScenarioConfig&)> get;  // empty string: omit
    std::function<void(ScenarioConfig&, const std::string& key, const std::string&)> set;
};

Field real(std::string sec, std::string key, double ScenarioConfig::*top) {
    return {sec, key, [top](const ScenarioConfig& c) { return num(c.*top); },
            [top](ScenarioConfig& c, const std::string& k, const std::string& v) { c.*top = to_double(k, v); }};
}

template <class Sub, class T>
Field nested(std::string sec, std::string key, Sub ScenarioConfig::*part, T Sub::*field) {
    return {sec, key,
            [part, field](const ScenarioConfig& c) {
                if constexpr (std::is_floating_point_v<T>) return num(c.*part.*field);
                else return std::to_string(c.*part.*field);
            },
            [part, field](ScenarioConfig& c, const std::string& k, const std::string& v) {
                if constexpr (std::is_floating_point_v<T>) c.*part.*field = to_double(k, v);
                else c.*part.*field = to_int<T>(k, v);
            }};
}

Field point(std::string sec, std::string key, Point NodeLayout::*who, double Point::*axis) {
    return {sec, key, [who, axis](const ScenarioConfig& c) { return num(c.layout.*who.*axis); },
            [who, axis](ScenarioConfig& c, const std::string& k, const std::string& v) {
                c.layout.*who.*axis = to_double(k, v);
            }};
}

Field schedule(std::string sec, std::optional<double> ScenarioConfig::*s) {
    return {sec, "switch_period_s",
            [s](const ScenarioConfig& c) { return (c.*s) ? num(*(c.*s)) : std::string(); },
            [s](ScenarioConfig& c, const std::string& k, const std::string& v) { c.*s = to_double(k, v); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> f = [] {
        std::vector<Field> v;
        v.push_back({"scenario", "name", [](const ScenarioConfig& c) { return c.name; },
                     [](ScenarioConfig& c, const std::string&, const std::string& s) { c.name = trim(s); }});
        v.push_back({"scenario", "seed", [](const ScenarioConfig& c) { return std::to_string(c.seed); },
                     [](ScenarioConfig& c, const std::string& k, const std::string& s) {
                         c.seed = to_int<std::uint64_t>(k, s);
                     }});
        v.push_back({"scenario", "feature_mode", [](const ScenarioConfig& c) { return std::string(to_string(c.feature_mode)); },
                     [](ScenarioConfig& c, const std::string& k, const std::string& s) {
                         const auto t = trim(s);
                         if (t == "csi") c.feature_mode = FeatureMode::csi;
                         else if (t == "rss") c.feature_mode = FeatureMode::rss;
                         else invalid(k, t, "csi|rss");
                     }});
        v.push_back({"scenario", "quantizer", [](const ScenarioConfig& c) { return std::string(to_string(c.quantizer)); },
                     [](ScenarioConfig& c, const std::string& k, const std::string& s) {
                         const auto t = trim(s);
                         if (t == "double_threshold") c.quantizer = Quantizer::double_threshold;
                         else if (t == "cdf") c.quantizer = Quantizer::cdf;
                         else invalid(k, t, "double_threshold|cdf");
                     }});
        v.push_back(real("scenario", "alpha", &ScenarioConfig::alpha));
        v.push_back({"scenario", "code", [](const ScenarioConfig& c) { return std::string(to_string(c.code)); },
                     [](ScenarioConfig& c, const std::string& k, const std::string& s) {
                         const auto t = trim(s);
                         if (t == "bch127_64") c.code = CodeChoice::bch127_64;
                         else if (t == "hamming74") c.code = CodeChoice::hamming74;
                         else invalid(k, t, "bch127_64|hamming74");
                     }});
        auto integer = [](std::string key, std::int64_t ScenarioConfig::*m) {
            return Field{"scenario", key, [m](const ScenarioConfig& c) { return std::to_string(c.*m); },
                         [m](ScenarioConfig& c, const std::string& k, const std::string& s) {
                             c.*m = to_int<std::int64_t>(k, s);
                         }};
        };
        v.push_back(integer("n_frames", &ScenarioConfig::n_frames));
        v.push_back(integer("decimation", &ScenarioConfig::decimation));
        v.push_back(integer("stats_block_frames", &ScenarioConfig::stats_block_frames));
        v.push_back(integer("safety_bits", &ScenarioConfig::safety_bits));
        v.push_back(integer("pa_batch_blocks", &ScenarioConfig::pa_batch_blocks));
        v.push_back(real("scenario", "significance", &ScenarioConfig::significance));
        v.push_back(real("scenario", "magnitude_floor_db", &ScenarioConfig::magnitude_floor_db));

        v.push_back(point("layout", "alice_x", &NodeLayout::alice, &Point::x));
        v.push_back(point("layout", "alice_y", &NodeLayout::alice, &Point::y));
        v.push_back(point("layout", "bob_x", &NodeLayout::bob, &Point::x));
        v.push_back(point("layout", "bob_y", &NodeLayout::bob, &Point::y));
        v.push_back(point("layout", "ris_x", &NodeLayout::ris, &Point::x));
        v.push_back(point("layout", "ris_y", &NodeLayout::ris, &Point::y));
        v.push_back(point("layout", "eve_x", &NodeLayout::eve, &Point::x));
        v.push_back(point("layout", "eve_y", &NodeLayout::eve, &Point::y));

        v.push_back(nested("geometry", "rows", &ScenarioConfig::geometry, &RisGeometry::rows));
        v.push_back(nested("geometry", "cols", &ScenarioConfig::geometry, &RisGeometry::cols));
        v.push_back(nested("geometry", "rows_per_group", &ScenarioConfig::geometry, &RisGeometry::rows_per_group));
        v.push_back(nested("geometry", "phase_levels", &ScenarioConfig::geometry, &RisGeometry::phase_levels));
        v.push_back(nested("geometry", "unit_size_m", &ScenarioConfig::geometry, &RisGeometry::unit_size_m));

        v.push_back(nested("fading", "rho", &ScenarioConfig::fading, &FadingParams::rho));
        v.push_back(nested("fading", "static_rho", &ScenarioConfig::fading, &FadingParams::static_rho));
        v.push_back(nested("fading", "direct_taps", &ScenarioConfig::fading, &FadingParams::direct_taps));
        v.push_back(nested("fading", "ris_delay_taps", &ScenarioConfig::fading, &FadingParams::ris_delay_taps));
        v.push_back(nested("fading", "carrier_hz", &ScenarioConfig::fading, &FadingParams::carrier_hz));
        v.push_back(nested("fading", "pathloss_exponent", &ScenarioConfig::fading, &FadingParams::pathloss_exponent));
        v.push_back(nested("fading", "reference_distance_m", &ScenarioConfig::fading, &FadingParams::reference_distance_m));

        v.push_back(nested("frame", "frame_period_s", &ScenarioConfig::frame, &FrameConfig::frame_period_s));
        v.push_back(nested("frame", "subcarriers", &ScenarioConfig::frame, &FrameConfig::subcarriers));
        v.push_back(nested("frame", "pilot_spacing", &ScenarioConfig::frame, &FrameConfig::pilot_spacing));
        v.push_back(nested("frame", "data_bits", &ScenarioConfig::frame, &FrameConfig::data_bits));
        v.push_back(nested("frame", "probe_gap_s", &ScenarioConfig::frame, &FrameConfig::probe_gap_s));
        v.push_back(nested("frame", "tx_power_dbm", &ScenarioConfig::frame, &FrameConfig::tx_power_dbm));
        v.push_back(nested("frame", "noise_floor_dbm", &ScenarioConfig::frame, &FrameConfig::noise_floor_dbm));
        v.push_back(nested("frame", "rx_gain_std_db", &ScenarioConfig::frame, &FrameConfig::rx_gain_std_db));
        v.push_back(nested("frame", "rx_gain_coherence_s", &ScenarioConfig::frame, &FrameConfig::rx_gain_coherence_s));

        v.push_back(schedule("legit_schedule", &ScenarioConfig::legit_switch_period_s));
        v.push_back(schedule("attacker_schedule", &ScenarioConfig::attacker_switch_period_s));
        return v;
    }();
    return f;
}

const Field* find_field(const std::string& section, const std::string& key) {
    for (const auto& f : fields())
        if (f.section == section && f.key == key) return &f;
    return nullptr;
}

bool known_section(const std::string& s) {
    for (const auto& f : fields())
        if (f.section == s) return true;
    return false;
}

ScenarioConfig from_tree(const pt::ptree& tree) {
    ScenarioConfig c;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError(ConfigErrorKind::unknown_key, section,
                              fmt::format("{}: key outside of any section", section));
        if (!known_section(section))
            throw ConfigError(ConfigErrorKind::unknown_key, section,
                              fmt::format("[{}]: unknown section", section));
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            const Field* f = find_field(section, key);
            if (f == nullptr)
                throw ConfigError(ConfigErrorKind::unknown_key, full, fmt::format("{}: unknown key", full));
            f->set(c, full, value.data());
        }
    }
    c.validate();
    return c;
}

}  // namespace

ScenarioConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(ConfigErrorKind::syntax, "", fmt::format("syntax error at line {}: {}", e.line(), e.message()));
    }
    return from_tree(tree);
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec))
        throw ConfigError(ConfigErrorKind::missing_file, "", fmt::format("{}: no such config file", path));
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config_string(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(e.kind(), e.key(), fmt::format("{}: {}", path, e.what()));
    }
}

std::vector<ConfigEntry> config_entries(const ScenarioConfig& c) {
    std::vector<ConfigEntry> out;
    for (const auto& f : fields()) {
        std::string v = f.get(c);
        if (!v.empty()) out.push_back({f.section, f.key, std::move(v)});
    }
    return out;
}

std::string to_config_string(const ScenarioConfig& c) {
    std::string out;
    std::string current;
    for (const auto& e : config_entries(c)) {
        if (e.section != current) {
            if (!current.empty()) out += "\n";
            out += fmt::format("[{}]\n", e.section);
            current = e.section;
        }
        out += fmt::format("{} = {}\n", e.key, e.value);
    }
    return out;
}

}  // namespace rislab
