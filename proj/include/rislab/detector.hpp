#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rislab/experiments.hpp"

namespace rislab {

struct DetectorCalibration {
    std::size_t window = 10;
    double mean = 0.0;    // of the secure windowed RSS variance
    double stddev = 0.0;
    double threshold = 0.0;
    double false_alarm = 0.05;
};

// Sample variance of each consecutive non-overlapping window of W values.
std::vector<double> windowed_variance(std::span<const double> rss, std::size_t window);

DetectorCalibration calibrate_detector(std::span<const double> secure_rss, std::size_t window,
                                       double false_alarm = 0.05);

// true = attack declared for that window
std::vector<bool> detect_attack(std::span<const double> rss, const DetectorCalibration& cal);

// Bob's RSS (dB) for frames [first, first + count), every frame, no decimation.
std::vector<double> record_rss_stream(const ScenarioConfig& config, std::int64_t count,
                                      std::int64_t first = 0);

}  // namespace rislab
