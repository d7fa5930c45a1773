#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "rislab/config.hpp"
#include "rislab/experiments.hpp"
#include "rislab/randomness.hpp"
#include "rislab/reconcile.hpp"
#include "rislab/report.hpp"
#include "rislab/selftest.hpp"

namespace py = pybind11;
using namespace rislab;

namespace {

ScenarioConfig preset_or_throw(const std::string& name) {
    if (auto c = find_preset(name)) return *c;
    throw py::key_error("unknown preset '" + name + "'");
}

std::string run_json(ScenarioConfig c, std::optional<std::uint64_t> seed, std::optional<std::int64_t> frames,
                     std::optional<std::string> feature, std::optional<std::string> quantizer) {
    if (seed) c.seed = *seed;
    if (frames) c.n_frames = *frames;
    if (feature) {
        if (*feature == "csi") c.feature_mode = FeatureMode::csi;
        else if (*feature == "rss") c.feature_mode = FeatureMode::rss;
        else throw py::value_error("feature must be 'csi' or 'rss'");
    }
    if (quantizer) {
        if (*quantizer == "double_threshold") c.quantizer = Quantizer::double_threshold;
        else if (*quantizer == "cdf") c.quantizer = Quantizer::cdf;
        else throw py::value_error("quantizer must be 'double_threshold' or 'cdf'");
    }
    const MetricsReport r = run_scenario(c);
    return report_to_json(r, c).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "RIS-aided key generation simulator (native core)";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("preset_names", &preset_names);
    m.def("preset_config", [](const std::string& name) { return to_config_string(preset_or_throw(name)); },
          py::arg("name"));
    m.def(
        "run_preset_json",
        [](const std::string& name, std::optional<std::uint64_t> seed, std::optional<std::int64_t> frames,
           std::optional<std::string> feature, std::optional<std::string> quantizer) {
            ScenarioConfig c = preset_or_throw(name);
            py::gil_scoped_release nogil;
            return run_json(std::move(c), seed, frames, feature, quantizer);
        },
        py::arg("name"), py::arg("seed") = py::none(), py::arg("frames") = py::none(),
        py::arg("feature") = py::none(), py::arg("quantizer") = py::none());
    m.def(
        "run_config_json",
        [](const std::string& text, std::optional<std::uint64_t> seed, std::optional<std::int64_t> frames) {
            ScenarioConfig c = parse_config_string(text);
            py::gil_scoped_release nogil;
            return run_json(std::move(c), seed, frames, std::nullopt, std::nullopt);
        },
        py::arg("text"), py::arg("seed") = py::none(), py::arg("frames") = py::none());
    m.def("normalize_config", [](const std::string& text) { return to_config_string(parse_config_string(text)); },
          py::arg("text"));

    m.def(
        "double_threshold_quantize",
        [](const std::vector<double>& column, double alpha) {
            const ThresholdBits r = double_threshold_quantize(column, alpha);
            return py::make_tuple(r.bits, r.retained);
        },
        py::arg("column"), py::arg("alpha") = 0.2);
    m.def("cdf_quantize", [](const std::vector<double>& column) { return cdf_single_bit_quantize(column); },
          py::arg("column"));

    m.def("monobit_p", [](const Bits& bits) { return monobit(bits).p_value; }, py::arg("bits"));
    m.def("runs_p", [](const Bits& bits) { return runs(bits).p_value; }, py::arg("bits"));

    m.def(
        "reconcile",
        [](const std::string& code_name, const Bits& alice, const Bits& bob) -> std::optional<Bits> {
            const BlockCodeSpec code = code_name == "hamming74" ? make_code(CodeChoice::hamming74)
                                       : code_name == "bch127_64"
                                           ? make_code(CodeChoice::bch127_64)
                                           : throw py::value_error("code must be 'hamming74' or 'bch127_64'");
            if (alice.size() != static_cast<std::size_t>(code.n) || bob.size() != alice.size())
                throw py::value_error("blocks must have the code length");
            return reconcile_block(bob, syndrome(alice, code), code);
        },
        py::arg("code"), py::arg("alice"), py::arg("bob"));

    m.def("selftest", [] {
        py::list out;
        for (const auto& r : run_selftest()) out.append(py::make_tuple(r.name, r.pass, r.detail));
        return out;
    });
}
