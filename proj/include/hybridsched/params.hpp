#pragma once

#include <cmath>
#include <stdexcept>

namespace hybridsched {

/// Switch parameters. The circuit rate is normalized to 1, so `packet_rate`
/// is the packet switch's per-port rate as a fraction of the circuit rate and
/// `delta` is the reconfiguration delay in units of circuit time.
struct SystemParams {
    int n = 0;
    double delta = 0.01;
    double packet_rate = 0.1;

    static SystemParams from_ratio(int n, double delta, double rate_ratio) {
        return {n, delta, 1.0 / rate_ratio};
    }
};

inline void check_params(const SystemParams& p) {
    if (p.n < 1) throw std::invalid_argument("params: n must be positive");
    if (!(p.delta >= 0.0) || !std::isfinite(p.delta))
        throw std::invalid_argument("params: delta must be finite and >= 0");
    if (!(p.packet_rate > 0.0) || !std::isfinite(p.packet_rate))
        throw std::invalid_argument("params: packet rate must be positive");
}

/// How the per-step duration search walks the candidate set (the distinct
/// positive entries of the effective demand, sorted ascending).
///   FullScan      evaluates every candidate.
///   BitonicBinary discrete peak search, ~2 log2 |V| evaluations.
///   Sampled       full scan over every stride-th order statistic.
enum class SearchMode { FullScan, BitonicBinary, Sampled };

struct SearchStrategy {
    SearchMode mode = SearchMode::BitonicBinary;
    int stride = 1;  // Sampled only: examine candidates stride, 2*stride, ...

    static SearchStrategy full_scan() { return {SearchMode::FullScan, 1}; }
    static SearchStrategy bitonic() { return {SearchMode::BitonicBinary, 1}; }
    static SearchStrategy sampled(int stride) {
        if (stride < 1) throw std::invalid_argument("sampled search: stride must be >= 1");
        return {SearchMode::Sampled, stride};
    }
};

}  // namespace hybridsched
