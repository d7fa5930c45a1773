#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rislab/config.hpp"
#include "rislab/errors.hpp"
#include "rislab/experiments.hpp"
#include "rislab/report.hpp"
#include "rislab/selftest.hpp"

namespace fs = std::filesystem;
using namespace rislab;

namespace {

enum Exit : int {
    ok = 0,
    runtime_failure = 1,
    usage = 2,
    missing_file = 3,
    syntax = 4,
    unknown_key = 5,
    invalid_value = 6,
    unknown_preset = 7,
};

struct UnknownPreset : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> frames;
    std::string out;
    std::string format = "both";
    std::string feature;
    std::string quantizer;
    bool trace = false;
};

std::string default_out_dir() {
    if (const char* env = std::getenv("RISLAB_OUT_DIR"); env != nullptr && *env != '\0') return env;
    return "rislab_out";
}

// file names come from scenario names; keep them inside the output directory
std::string safe_stem(const std::string& s) {
    std::string out;
    for (char ch : s) {
        const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                          ch == '-' || ch == '_';
        out += keep ? ch : '_';
    }
    return out.empty() ? "run" : out;
}

void apply_overrides(ScenarioConfig& c, const Common& o) {
    if (o.seed) c.seed = *o.seed;
    if (o.frames) c.n_frames = *o.frames;
    if (o.feature == "csi") c.feature_mode = FeatureMode::csi;
    if (o.feature == "rss") c.feature_mode = FeatureMode::rss;
    if (o.quantizer == "double_threshold") c.quantizer = Quantizer::double_threshold;
    if (o.quantizer == "cdf") c.quantizer = Quantizer::cdf;
    c.validate();
}

fs::path prepare_out(const Common& o) {
    const fs::path dir = o.out.empty() ? fs::path(default_out_dir()) : fs::path(o.out);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
}

bool want_csv(const Common& o) { return o.format != "json"; }
bool want_json(const Common& o) { return o.format != "csv"; }

int run_one(const ScenarioConfig& c, const Common& o) {
    const fs::path dir = prepare_out(o);
    const std::string stem = safe_stem(fmt::format("{}_seed{}", c.name, c.seed));

    std::ofstream trace;
    RoundObserver observer;
    if (o.trace) {
        trace.open(dir / (stem + "_trace.csv"), std::ios::binary);
        trace << "frame_index,direction,time_s,rss_db,csi_mean_db\n";
        observer = [&trace](const ProbeRound& r) {
            for (const ProbeObservation* p : {&r.at_B, &r.at_A, &r.eve_uplink, &r.eve_downlink}) {
                if (p->csi_estimate.empty()) continue;
                double m = 0.0;
                for (const auto& h : p->csi_estimate) m += 20.0 * std::log10(std::max(std::abs(h), 1e-300));
                m /= static_cast<double>(p->csi_estimate.size());
                trace << fmt::format("{},{},{},{},{}\n", p->frame_index, to_string(p->direction), p->time_s,
                                     p->rss_db, m);
            }
        };
    }

    const MetricsReport r = evaluate(c, simulate(c, observer));
    if (want_csv(o)) write_text(dir / (stem + ".csv"), csv_header() + "\n" + csv_row(r) + "\n");
    if (want_json(o)) write_text(dir / (stem + ".json"), report_to_json(r, c).dump(2) + "\n");
    std::cout << summary_line(r) << "\n";
    return Exit::ok;
}

ScenarioConfig load_preset(const std::string& name) {
    if (auto c = find_preset(name)) return *c;
    std::string names;
    for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
    throw UnknownPreset("unknown preset '" + name + "'; valid presets: " + names);
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError(ConfigErrorKind::invalid_value, "values", "sweep: bad value '" + item + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

int run_sweep(ScenarioConfig base, const std::string& axis, const std::string& values,
              const std::string& policy, const Common& o) {
    const auto axes = sweep_axes();
    if (std::find(axes.begin(), axes.end(), axis) == axes.end())
        throw ConfigError(ConfigErrorKind::invalid_value, "axis", "sweep: unknown axis '" + axis + "'");
    const auto pts = sweep(base, axis, parse_values(values),
                           policy == "shared" ? SeedPolicy::shared : SeedPolicy::derived);
    const fs::path dir = prepare_out(o);
    const std::string stem = safe_stem(fmt::format("{}_sweep_{}", base.name, axis));
    std::string csv = "value," + csv_header() + "\n";
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& p : pts) {
        csv += fmt::format("{},{}\n", p.value, csv_row(p.report));
        nlohmann::ordered_json j;
        j["axis"] = axis;
        j["value"] = p.value;
        j["report"] = report_to_json(p.report, p.config);
        arr.push_back(std::move(j));
        std::cout << fmt::format("{}={} ", axis, p.value) << summary_line(p.report) << "\n";
    }
    if (want_csv(o)) write_text(dir / (stem + ".csv"), csv);
    if (want_json(o)) write_text(dir / (stem + ".json"), arr.dump(2) + "\n");
    return Exit::ok;
}

int config_exit(const ConfigError& e) {
    switch (e.kind()) {
        case ConfigErrorKind::missing_file: return Exit::missing_file;
        case ConfigErrorKind::syntax: return Exit::syntax;
        case ConfigErrorKind::unknown_key: return Exit::unknown_key;
        case ConfigErrorKind::invalid_value: return Exit::invalid_value;
    }
    return Exit::runtime_failure;
}

void add_common(CLI::App* cmd, Common& o) {
    cmd->add_option("--seed", o.seed, "Override the scenario seed");
    cmd->add_option("--frames", o.frames, "Override n_frames");
    cmd->add_option("--out", o.out, "Output directory (default $RISLAB_OUT_DIR or ./rislab_out)");
    cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json", "both"}));
    cmd->add_option("--feature", o.feature, "Feature mode override")->check(CLI::IsMember({"csi", "rss"}));
    cmd->add_option("--quantizer", o.quantizer, "Quantizer override")
        ->check(CLI::IsMember({"double_threshold", "cdf"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-assisted physical-layer key generation simulator"};
    app.require_subcommand(1);
    Common o;

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run a scenario from a config file");
    run->add_option("--config", config_path, "Scenario file (INI)")->required();
    run->add_flag("--trace", o.trace, "Also write per-round observations");
    add_common(run, o);

    std::string preset_name;
    bool print_config = false;
    bool list = false;
    auto* pre = app.add_subcommand("preset", "Run a built-in preset (DATA1..DATA9)");
    pre->add_option("name", preset_name, "Preset name");
    pre->add_flag("--list", list, "List preset names");
    pre->add_flag("--print-config", print_config, "Print the preset as a config file and exit");
    pre->add_flag("--trace", o.trace, "Also write per-round observations");
    add_common(pre, o);

    std::string axis;
    std::string values;
    std::string policy = "derived";
    std::string sweep_preset;
    auto* sw = app.add_subcommand("sweep", "Sweep one parameter of a scenario");
    sw->add_option("--config", config_path, "Base scenario file");
    sw->add_option("--preset", sweep_preset, "Base preset");
    sw->add_option("--axis", axis, "Parameter to sweep")->required();
    sw->add_option("--values", values, "Comma-separated values")->required();
    sw->add_option("--seed-policy", policy, "derived: fresh seed per point; shared: common seed")
        ->check(CLI::IsMember({"derived", "shared"}));
    add_common(sw, o);

    auto* st = app.add_subcommand("selftest", "Run the quick invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? Exit::ok : Exit::usage;
    }

    try {
        if (*run) {
            ScenarioConfig c = parse_config_file(config_path);
            apply_overrides(c, o);
            return run_one(c, o);
        }
        if (*pre) {
            if (list) {
                for (const auto& n : preset_names()) std::cout << n << "\n";
                return Exit::ok;
            }
            if (preset_name.empty()) {
                std::cerr << "preset: missing preset name\n";
                return Exit::usage;
            }
            ScenarioConfig c = load_preset(preset_name);
            apply_overrides(c, o);
            if (print_config) {
                std::cout << to_config_string(c);
                return Exit::ok;
            }
            return run_one(c, o);
        }
        if (*sw) {
            if (config_path.empty() == sweep_preset.empty()) {
                std::cerr << "sweep: give exactly one of --config or --preset\n";
                return Exit::usage;
            }
            ScenarioConfig c = config_path.empty() ? load_preset(sweep_preset) : parse_config_file(config_path);
            apply_overrides(c, o);
            return run_sweep(c, axis, values, policy, o);
        }
        if (*st) {
            bool all = true;
            for (const auto& r : run_selftest()) {
                std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << (r.detail.empty() ? "" : ": ") << r.detail
                          << "\n";
                all = all && r.pass;
            }
            return all ? Exit::ok : Exit::runtime_failure;
        }
    } catch (const UnknownPreset& e) {
        std::cerr << e.what() << "\n";
        return Exit::unknown_preset;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::runtime_failure;
    }
    return Exit::usage;
}
