#include "rislab/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rislab {

const char* to_string(FeatureMode m) { return m == FeatureMode::rss ? "rss" : "csi"; }
const char* to_string(Quantizer q) { return q == Quantizer::cdf ? "cdf" : "double_threshold"; }

std::vector<double> FeatureSeries::column(std::size_t c) const {
    std::vector<double> out(rows);
    for (std::size_t r = 0; r < rows; ++r) out[r] = values[r * cols + c];
    return out;
}

void append_features(FeatureSeries& s, const ProbeObservation& obs, double floor_db) {
    if (s.mode == FeatureMode::rss) {
        if (s.rows == 0) s.cols = 1;
        s.values.push_back(std::isfinite(obs.rss_db) ? obs.rss_db : floor_db);
    } else {
        if (s.rows == 0) s.cols = obs.csi_estimate.size();
        if (obs.csi_estimate.size() != s.cols || s.cols == 0)
            throw std::domain_error("feature_extract: inconsistent pilot count");
        for (const auto& h : obs.csi_estimate) {
            const double m2 = std::norm(h);
            const double db = m2 > 0.0 ? 10.0 * std::log10(m2) : floor_db;
            s.values.push_back(std::max(db, floor_db));
        }
    }
    ++s.rows;
}

FeatureSeries feature_extract(std::span<const ProbeObservation> observations, FeatureMode mode,
                              double floor_db) {
    if (observations.empty()) throw std::domain_error("feature_extract: no observations");
    FeatureSeries s;
    s.mode = mode;
    for (const auto& o : observations) append_features(s, o, floor_db);
    return s;
}

namespace {

struct Moments {
    double mean = 0.0;
    double stddev = 0.0;
};

Moments moments(std::span<const double> x) {
    Moments m;
    const double n = static_cast<double>(x.size());
    m.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - m.mean) * (v - m.mean);
    m.stddev = std::sqrt(ss / n);
    return m;
}

double median(std::span<const double> x) {
    std::vector<double> v(x.begin(), x.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return lo + (hi - lo) / 2.0;
}

}  // namespace

ThresholdBits double_threshold_quantize(std::span<const double> column, double alpha) {
    if (column.size() < 2) throw std::domain_error("double_threshold_quantize: need >= 2 values");
    if (!(alpha >= 0.0)) throw std::domain_error("double_threshold_quantize: alpha must be >= 0");
    ThresholdBits out;
    const Moments m = moments(column);
    if (!(m.stddev > 0.0)) return out;
    const double hi = m.mean + alpha * m.stddev;
    const double lo = m.mean - alpha * m.stddev;
    for (std::size_t i = 0; i < column.size(); ++i) {
        if (column[i] > hi) {
            out.bits.push_back(1);
            out.retained.push_back(i);
        } else if (column[i] < lo) {
            out.bits.push_back(0);
            out.retained.push_back(i);
        }
    }
    return out;
}

Bits cdf_single_bit_quantize(std::span<const double> column) {
    if (column.size() < 2) throw std::domain_error("cdf_single_bit_quantize: need >= 2 values");
    const double med = median(column);
    Bits out(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) out[i] = column[i] > med ? 1 : 0;
    return out;
}

std::vector<std::size_t> index_reconcile(std::span<const std::size_t> a,
                                         std::span<const std::size_t> b) {
    std::vector<std::size_t> out;
    if (std::is_sorted(a.begin(), a.end()) && std::is_sorted(b.begin(), b.end())) {
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    }
    // unsorted input: keep A's order
    std::vector<std::size_t> sb(b.begin(), b.end());
    std::sort(sb.begin(), sb.end());
    for (std::size_t x : a)
        if (std::binary_search(sb.begin(), sb.end(), x)) out.push_back(x);
    return out;
}

double bit_disagreement_rate(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) throw std::domain_error("bit_disagreement_rate: length mismatch");
    if (a.empty()) throw std::domain_error("bit_disagreement_rate: empty input");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != 0) != (b[i] != 0);
    return static_cast<double>(d) / static_cast<double>(a.size());
}

QuantizedSeries quantize_series(const FeatureSeries& s, Quantizer q, double alpha,
                                std::size_t block_frames) {
    QuantizedSeries out;
    out.rows = s.rows;
    out.cols = s.cols;
    out.bits.assign(s.rows * s.cols, 0);
    std::vector<std::uint8_t> keep(s.rows * s.cols, 0);
    const std::size_t block = block_frames == 0 ? s.rows : block_frames;
    std::vector<double> col;
    for (std::size_t c = 0; c < s.cols; ++c) {
        for (std::size_t r0 = 0; r0 < s.rows; r0 += block) {
            const std::size_t r1 = std::min(s.rows, r0 + block);
            if (r1 - r0 < 2) continue;  // a lone trailing frame has no statistics
            col.resize(r1 - r0);
            for (std::size_t r = r0; r < r1; ++r) col[r - r0] = s.values[r * s.cols + c];
            if (q == Quantizer::cdf) {
                const Bits b = cdf_single_bit_quantize(col);
                for (std::size_t i = 0; i < b.size(); ++i) {
                    out.bits[(r0 + i) * s.cols + c] = b[i];
                    keep[(r0 + i) * s.cols + c] = 1;
                }
            } else {
                // cells inside the guard band still get a side-of-mean bit; only
                // `retained` says which ones count
                const double mean = moments(col).mean;
                for (std::size_t i = 0; i < col.size(); ++i)
                    out.bits[(r0 + i) * s.cols + c] = col[i] > mean ? 1 : 0;
                const ThresholdBits tb = double_threshold_quantize(col, alpha);
                for (std::size_t i = 0; i < tb.bits.size(); ++i) {
                    const std::size_t cell = (r0 + tb.retained[i]) * s.cols + c;
                    out.bits[cell] = tb.bits[i];
                    keep[cell] = 1;
                }
            }
        }
    }
    for (std::size_t i = 0; i < keep.size(); ++i)
        if (keep[i]) out.retained.push_back(i);
    return out;
}

BitMaterial gather_bits(const QuantizedSeries& q, std::span<const std::size_t> flat) {
    BitMaterial m;
    m.bits.reserve(flat.size());
    m.origin_index.reserve(flat.size());
    for (std::size_t f : flat) {
        if (f >= q.bits.size()) throw std::domain_error("gather_bits: index out of range");
        m.bits.push_back(q.bits[f]);
        m.origin_index.push_back({f / q.cols, f % q.cols});
    }
    return m;
}

}  // namespace rislab
