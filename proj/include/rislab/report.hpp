#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rislab/experiments.hpp"

namespace rislab {

nlohmann::ordered_json config_to_json(const ScenarioConfig& config);

// Full nested report with the resolved config and seed embedded.
nlohmann::ordered_json report_to_json(const MetricsReport& report, const ScenarioConfig& config);

// Stable column set, one row per run.
std::string csv_header();
std::string csv_row(const MetricsReport& report);

// bdr, kgr_raw, kgr_final, eve_bdr on one line
std::string summary_line(const MetricsReport& report);

}  // namespace rislab
