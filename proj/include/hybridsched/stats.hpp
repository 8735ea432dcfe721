#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridsched/matrix.hpp"

namespace hybridsched {

/// Time for the hybrid switch to clear the demand: the circuit schedule and
/// the packet switch drain concurrently, so the answer is whichever finishes
/// last.
inline double transmission_time(double circuit_time, const Matrix& residual, double packet_rate) {
    if (!(packet_rate > 0.0)) throw std::invalid_argument("transmission_time: packet rate must be positive");
    if (circuit_time < 0.0) throw std::invalid_argument("transmission_time: negative circuit time");
    return std::max(circuit_time, max_load(residual) / packet_rate);
}

struct SummaryStats {
    double mean = 0.0;
    double median = 0.0;
    double p25 = 0.0;
    double p75 = 0.0;
    double notch = 0.0;  // half-width of the median's 95% interval, 1.57*IQR/sqrt(count)
    int count = 0;
};

/// Percentile by linear interpolation between order statistics.
inline double percentile(const std::vector<double>& sorted, double q) {
    double pos = q * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline SummaryStats summarize(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("summarize: empty input");
    std::sort(values.begin(), values.end());
    SummaryStats s;
    s.count = static_cast<int>(values.size());
    double total = 0.0;
    for (double v : values) total += v;
    s.mean = total / static_cast<double>(values.size());
    s.median = percentile(values, 0.50);
    s.p25 = percentile(values, 0.25);
    s.p75 = percentile(values, 0.75);
    s.notch = 1.57 * (s.p75 - s.p25) / std::sqrt(static_cast<double>(values.size()));
    return s;
}

/// One scheduler execution, as recorded by the sweep harness.
struct RunResult {
    std::string algorithm;
    std::uint64_t seed = 0;
    double delta = 0.0;
    double rate_ratio = 0.0;  // r_c / r_p
    double total_time = 0.0;  // T
    int configurations = 0;   // schedule steps, or connection count for BFF
    double wall_ms = 0.0;
};

}  // namespace hybridsched
