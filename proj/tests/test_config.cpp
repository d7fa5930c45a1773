#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "rislab/config.hpp"
#include "rislab/report.hpp"

using namespace rislab;

namespace {

ConfigErrorKind kind_of(const std::string& text) {
    try {
        parse_config_string(text);
    } catch (const ConfigError& e) {
        return e.kind();
    }
    FAIL("expected a ConfigError");
    return ConfigErrorKind::syntax;
}

std::string key_of(const std::string& text) {
    try {
        parse_config_string(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return {};
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("empty file gives the defaults") {
    CHECK(parse_config_string("") == ScenarioConfig{});
    CHECK(parse_config_string("; only a comment\n") == ScenarioConfig{});
    const ScenarioConfig c = parse_config_string("");
    CHECK(c.alpha == 0.2);
    CHECK(c.frame.subcarriers == 1200);
    CHECK(c.frame.pilots() == 200);
    CHECK(c.fading.direct_taps == 4);
    CHECK(c.geometry.units() == 256);
    CHECK(c.geometry.groups() == 4);
    CHECK_FALSE(c.legit_switch_period_s);
    CHECK_FALSE(c.attacker_switch_period_s);
}

TEST_CASE("partial files keep the other defaults") {
    const ScenarioConfig c = parse_config_string("[scenario]\nseed = 99\n\n[legit_schedule]\nswitch_period_s = 0.1\n");
    ScenarioConfig expect;
    expect.seed = 99;
    expect.legit_switch_period_s = 0.1;
    CHECK(c == expect);
    CHECK(parse_config_string("[frame]\nnoise_floor_dbm = -inf\n").frame.noise_floor_dbm == -INFINITY);
}

TEST_CASE("zero switch period is rejected by name") {
    CHECK(kind_of("[legit_schedule]\nswitch_period_s = 0\n") == ConfigErrorKind::invalid_value);
    CHECK(key_of("[legit_schedule]\nswitch_period_s = 0\n") == "legit_schedule.switch_period_s");
    CHECK(key_of("[attacker_schedule]\nswitch_period_s = -1\n") == "attacker_schedule.switch_period_s");
}

TEST_CASE("error kinds") {
    CHECK(kind_of("[scenario]\nbogus = 1\n") == ConfigErrorKind::unknown_key);
    CHECK(key_of("[scenario]\nbogus = 1\n") == "scenario.bogus");
    CHECK(kind_of("[nowhere]\nx = 1\n") == ConfigErrorKind::unknown_key);
    CHECK(kind_of("[scenario\nseed = 1\n") == ConfigErrorKind::syntax);
    CHECK(kind_of("[scenario]\nseed = 1\nseed = 2\n") == ConfigErrorKind::syntax);
    CHECK(kind_of("[scenario]\nn_frames = lots\n") == ConfigErrorKind::invalid_value);
    CHECK(key_of("[scenario]\nn_frames = lots\n") == "scenario.n_frames");
    CHECK(key_of("[scenario]\nn_frames = 0\n") == "scenario.n_frames");
    CHECK(key_of("[scenario]\ndecimation = 0\n") == "scenario.decimation");
    CHECK(key_of("[scenario]\nfeature_mode = phase\n") == "scenario.feature_mode");
    CHECK(key_of("[frame]\npilot_spacing = 7\n") == "frame.pilot_spacing");
    CHECK(key_of("[frame]\nprobe_gap_s = 0.02\n") == "frame.probe_gap_s");
    CHECK(key_of("[fading]\nrho = 1.5\n") == "fading.rho");
    CHECK(key_of("[fading]\nris_delay_taps = 2\n") == "fading.ris_delay_taps");
    CHECK(key_of("[legit_schedule]\nswitch_period_s = 0.1\n[attacker_schedule]\nswitch_period_s = 0.001\n") ==
          "attacker_schedule.switch_period_s");

    try {
        parse_config_file("/definitely/not/here.cfg");
        FAIL("expected missing file");
    } catch (const ConfigError& e) {
        CHECK(e.kind() == ConfigErrorKind::missing_file);
    }
}

TEST_CASE("round trip through text") {
    CHECK(parse_config_string(to_config_string(ScenarioConfig{})) == ScenarioConfig{});
    for (const auto& p : scenario_presets()) CHECK(parse_config_string(to_config_string(p)) == p);

    ScenarioConfig odd;
    odd.alpha = 0.1 + 0.2;  // not exactly representable in short decimal
    odd.frame.noise_floor_dbm = -INFINITY;
    odd.layout.eve = {0.123456789012345678, -2.5};
    odd.attacker_switch_period_s = 1.0 / 3.0;
    odd.feature_mode = FeatureMode::rss;
    odd.quantizer = Quantizer::cdf;
    odd.code = CodeChoice::hamming74;
    odd.seed = 18446744073709551615ULL;
    CHECK(parse_config_string(to_config_string(odd)) == odd);
}

TEST_CASE("file round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "rislab_config_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "defaults.cfg";
    {
        std::ofstream f(path);
        f << to_config_string(ScenarioConfig{});
    }
    CHECK(parse_config_file(path.string()) == ScenarioConfig{});
    std::filesystem::remove_all(dir);
}

TEST_CASE("shipped preset files equal the built-in presets") {
    const std::filesystem::path dir = std::filesystem::path(RISLAB_SOURCE_DIR) / "presets";
    const auto names = preset_names();
    CHECK(names.size() == 9);
    for (const auto& n : names) {
        CAPTURE(n);
        const auto file = dir / (n + ".cfg");
        REQUIRE(std::filesystem::exists(file));
        CHECK(parse_config_file(file.string()) == *find_preset(n));
    }
}

TEST_CASE("reports embed the resolved config") {
    ScenarioConfig c = *find_preset("DATA2");
    c.n_frames = 500;
    MetricsReport r;
    r.scenario = c.name;
    r.seed = c.seed;
    const auto j = report_to_json(r, c);
    CHECK(j.contains("config"));
    CHECK(j["config"]["scenario"]["seed"] == c.seed);
    CHECK(j["seed"] == c.seed);
}

}
