#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hybridsched/matrix.hpp"
#include "hybridsched/random.hpp"

namespace hybridsched {

using DemandMatrix = Matrix;

/// Synthetic workload parameters. Each row carries `num_large` large flows
/// holding a `load_large` share of the row's traffic and `num_medium` medium
/// flows holding the rest, laid down as random fixed-point-free permutations.
/// Two optional noise terms perturb the matrix: multiplicative noise on the
/// flow entries and small positive "mice" noise on a fraction of the zero
/// entries.
struct TrafficGenConfig {
    int n = 100;
    int num_large = 4;
    int num_medium = 12;
    double load_large = 0.7;
    double load_medium = 0.3;
    bool flow_noise = true;            // Gaussian perturbation of nonzero entries
    bool mice_noise = true;            // positive noise on a share of zero entries
    double mice_fraction = 0.5;        // share of zero entries receiving mice noise
    double mice_sigma = 0.003;         // std of mice noise
    double flow_noise_rel_sigma = 0.2; // std relative to the entry value
    std::uint64_t seed = 1;
};

inline void check_config(const TrafficGenConfig& cfg) {
    if (cfg.n < 1) throw std::invalid_argument("demand config: n must be positive");
    if (cfg.num_large < 0 || cfg.num_medium < 0)
        throw std::invalid_argument("demand config: negative flow count");
    if (cfg.num_large + cfg.num_medium > cfg.n - 1)
        throw std::invalid_argument("demand config: flow count exceeds n-1");
    auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in_unit(cfg.load_large) || !in_unit(cfg.load_medium) || !in_unit(cfg.mice_fraction))
        throw std::invalid_argument("demand config: fraction out of [0,1]");
    if (std::abs(cfg.load_large + cfg.load_medium - 1.0) > 1e-12)
        throw std::invalid_argument("demand config: load shares must sum to 1");
    if (cfg.num_large == 0 && cfg.load_large != 0.0)
        throw std::invalid_argument("demand config: large load with zero large flows");
    if (cfg.num_medium == 0 && cfg.load_medium != 0.0)
        throw std::invalid_argument("demand config: medium load with zero medium flows");
    if (cfg.mice_sigma < 0.0 || cfg.flow_noise_rel_sigma < 0.0)
        throw std::invalid_argument("demand config: negative sigma");
}

/// Generates the workload matrix
///   D = (sum of large-flow permutations + sum of medium-flow permutations
///        + flow noise) * 0.9 + mice noise.
/// Permutations have no fixed points, so the diagonal stays zero. Flow noise
/// adds to each nonzero entry a zero-mean Gaussian with std proportional to
/// the entry, clamped at zero. Mice noise adds |Gaussian| values to a
/// uniformly chosen fixed-size subset of the off-diagonal zero entries.
/// Deterministic given the seed.
inline DemandMatrix generate_demand(const TrafficGenConfig& cfg) {
    check_config(cfg);
    Rng rng(cfg.seed);
    const int n = cfg.n;
    Matrix d(n, 0.0);

    auto add_flows = [&](int count, double share) {
        if (count == 0 || share == 0.0) return;
        double value = share / count;
        for (int k = 0; k < count; ++k) {
            std::vector<int> perm = random_derangement(rng, n);
            for (int i = 0; i < n; ++i) d(i, perm[i]) += value;
        }
    };
    add_flows(cfg.num_large, cfg.load_large);
    add_flows(cfg.num_medium, cfg.load_medium);

    if (cfg.flow_noise) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = d(i, j);
                if (v > 0.0) d(i, j) = std::max(0.0, v + rng.gaussian() * cfg.flow_noise_rel_sigma * v);
            }
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d(i, j) *= 0.9;

    if (cfg.mice_noise && cfg.mice_fraction > 0.0) {
        std::vector<int> zeros;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && d(i, j) == 0.0) zeros.push_back(i * n + j);
        auto count = static_cast<std::size_t>(
            std::llround(cfg.mice_fraction * static_cast<double>(zeros.size())));
        count = std::min(count, zeros.size());
        // partial Fisher-Yates picks the subset, then entries are filled in
        // index order so the draw sequence is stable
        for (std::size_t k = 0; k < count; ++k) {
            std::size_t pick = k + rng.below(zeros.size() - k);
            std::swap(zeros[k], zeros[pick]);
        }
        zeros.resize(count);
        std::sort(zeros.begin(), zeros.end());
        for (int cell : zeros) d(cell / n, cell % n) += std::abs(rng.gaussian()) * cfg.mice_sigma;
    }

    return d;
}

}  // namespace hybridsched
