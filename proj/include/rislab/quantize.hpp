#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rislab/probing.hpp"

namespace rislab {

using Bits = std::vector<std::uint8_t>;

enum class FeatureMode { rss, csi };
enum class Quantizer { double_threshold, cdf };

const char* to_string(FeatureMode m);
const char* to_string(Quantizer q);

constexpr double kMagnitudeFloorDb = -150.0;

// Row-major frames × dimensions.
struct FeatureSeries {
    FeatureMode mode = FeatureMode::csi;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::vector<double> column(std::size_t c) const;
};

FeatureSeries feature_extract(std::span<const ProbeObservation> observations, FeatureMode mode,
                              double floor_db = kMagnitudeFloorDb);

// Appends one frame; the series must already carry its mode.
void append_features(FeatureSeries& series, const ProbeObservation& obs,
                     double floor_db = kMagnitudeFloorDb);

struct ThresholdBits {
    Bits bits;
    std::vector<std::size_t> retained;
};

ThresholdBits double_threshold_quantize(std::span<const double> column, double alpha);
Bits cdf_single_bit_quantize(std::span<const double> column);

std::vector<std::size_t> index_reconcile(std::span<const std::size_t> retained_A,
                                         std::span<const std::size_t> retained_B);

double bit_disagreement_rate(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

struct Origin {
    std::size_t frame = 0;
    std::size_t dim = 0;
    bool operator==(const Origin&) const = default;
};

struct BitMaterial {
    Bits bits;
    std::vector<Origin> origin_index;
};

// One party's quantization of a whole series. `bits` has one entry per cell
// (meaningless where not retained); `retained` lists flat cell indices
// frame*cols + dim in ascending order.
struct QuantizedSeries {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Bits bits;
    std::vector<std::size_t> retained;
};

// Per-column quantization with statistics over blocks of `block_frames` rows
// (0 = the whole series).
QuantizedSeries quantize_series(const FeatureSeries& series, Quantizer q, double alpha,
                                std::size_t block_frames = 0);

BitMaterial gather_bits(const QuantizedSeries& q, std::span<const std::size_t> flat_indices);

}  // namespace rislab
