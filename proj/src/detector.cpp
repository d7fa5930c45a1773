#include "rislab/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rislab {

std::vector<double> windowed_variance(std::span<const double> rss, std::size_t w) {
    if (w < 2) throw std::domain_error("windowed_variance: window must be >= 2");
    std::vector<double> out;
    for (std::size_t s = 0; s + w <= rss.size(); s += w) {
        double m = 0.0;
        for (std::size_t i = s; i < s + w; ++i) m += rss[i];
        m /= static_cast<double>(w);
        double v = 0.0;
        for (std::size_t i = s; i < s + w; ++i) v += (rss[i] - m) * (rss[i] - m);
        out.push_back(v / static_cast<double>(w - 1));
    }
    return out;
}

DetectorCalibration calibrate_detector(std::span<const double> secure, std::size_t w, double fa) {
    if (w < 2) throw std::domain_error("calibrate_detector: window must be >= 2");
    if (secure.size() < 10 * w) throw std::domain_error("calibrate_detector: need at least 10 windows");
    if (!(fa > 0.0 && fa < 1.0)) throw std::domain_error("calibrate_detector: false alarm must lie in (0, 1)");
    std::vector<double> v = windowed_variance(secure, w);
    DetectorCalibration cal;
    cal.window = w;
    cal.false_alarm = fa;
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    cal.mean = m;
    cal.stddev = std::sqrt(ss / static_cast<double>(v.size()));
    // empirical (1 - fa) quantile: the smallest value exceeded by at most fa of the windows
    std::sort(v.begin(), v.end());
    const auto k = static_cast<std::size_t>(std::ceil((1.0 - fa) * static_cast<double>(v.size())));
    cal.threshold = v[std::min(v.size() - 1, k == 0 ? 0 : k - 1)];
    return cal;
}

std::vector<bool> detect_attack(std::span<const double> rss, const DetectorCalibration& cal) {
    const std::vector<double> v = windowed_variance(rss, cal.window);
    std::vector<bool> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > cal.threshold;
    return out;
}

std::vector<double> record_rss_stream(const ScenarioConfig& c, std::int64_t count, std::int64_t first) {
    c.validate();
    if (count < 0 || first < 0) throw std::domain_error("record_rss_stream: negative range");
    ProbingEnvironment env(c.environment());
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t f = first; f < first + count; ++f) out.push_back(env.probing_round(f).at_B.rss_db);
    return out;
}

}  // namespace rislab
