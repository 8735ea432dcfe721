#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "hybridsched/demand.hpp"
#include "hybridsched/matching.hpp"
#include "hybridsched/matrix.hpp"
#include "hybridsched/params.hpp"
#include "hybridsched/schedule.hpp"
#include "hybridsched/stats.hpp"

namespace hybridsched {

/// Traffic a configuration (M, alpha) can serve against the given demand:
/// sum over matched (i,j) of min(alpha, demand(i,j)).
inline double utility(const Matching& m, double alpha, const Matrix& demand) {
    double total = 0.0;
    for (int i = 0; i < m.size(); ++i) {
        int j = m.output_of(i);
        if (j >= 0) total += std::min(alpha, demand(i, j));
    }
    return total;
}

struct Configuration {
    Matching matching;
    double alpha = 0.0;
    double ratio = 0.0;  // utility / (delta + alpha)
};

namespace detail {

/// Distinct positive entries, ascending. Candidate durations for the
/// cost-adjusted utility search: the maximum is attained at an entry value.
inline std::vector<double> duration_candidates(const Matrix& demand) {
    std::vector<double> v;
    v.reserve(demand.data().size());
    for (double x : demand.data())
        if (x > 0.0) v.push_back(x);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline Configuration evaluate_candidate(const Matrix& demand, double alpha, double delta) {
    const int n = demand.size();
    Matrix capped(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) capped(i, j) = std::min(alpha, demand(i, j));
    Matching m = max_weight_matching(capped);
    double ratio = utility(m, alpha, demand) / (delta + alpha);
    return {std::move(m), alpha, ratio};
}

}  // namespace detail

/// Best configuration under the cost-adjusted utility
///   f(alpha) = ||min(alpha M, demand)||_1 / (delta + alpha),
/// with M the max-weight matching of the capped demand. Ties go to the
/// smaller alpha. FullScan is exhaustive and serves as the reference;
/// BitonicBinary is the production discrete peak search (a heuristic, f need
/// not be unimodal); Sampled(stride) scans every stride-th order statistic
/// and falls back to the largest candidate when fewer than stride exist.
inline Configuration best_configuration(const Matrix& demand, const SystemParams& params,
                                        const SearchStrategy& strategy = {}) {
    std::vector<double> candidates = detail::duration_candidates(demand);
    if (candidates.empty()) throw std::invalid_argument("best_configuration: demand has no positive entry");

    auto better = [](const Configuration& a, const Configuration& b) {
        return a.ratio > b.ratio || (a.ratio == b.ratio && a.alpha < b.alpha);
    };

    switch (strategy.mode) {
        case SearchMode::FullScan: {
            Configuration best;
            for (double alpha : candidates) {
                Configuration c = detail::evaluate_candidate(demand, alpha, params.delta);
                if (best.alpha == 0.0 || better(c, best)) best = std::move(c);
            }
            return best;
        }
        case SearchMode::Sampled: {
            Configuration best;
            std::size_t stride = static_cast<std::size_t>(strategy.stride);
            std::vector<double> picked;
            for (std::size_t k = stride; k <= candidates.size(); k += stride)
                picked.push_back(candidates[k - 1]);
            if (picked.empty()) picked.push_back(candidates.back());
            for (double alpha : picked) {
                Configuration c = detail::evaluate_candidate(demand, alpha, params.delta);
                if (best.alpha == 0.0 || better(c, best)) best = std::move(c);
            }
            return best;
        }
        case SearchMode::BitonicBinary: {
            std::map<std::size_t, Configuration> seen;
            auto eval = [&](std::size_t idx) -> const Configuration& {
                auto it = seen.find(idx);
                if (it == seen.end())
                    it = seen.emplace(idx, detail::evaluate_candidate(demand, candidates[idx], params.delta)).first;
                return it->second;
            };
            std::size_t lo = 0, hi = candidates.size() - 1;
            while (lo < hi) {
                std::size_t mid = lo + (hi - lo) / 2;
                if (eval(mid).ratio < eval(mid + 1).ratio)
                    lo = mid + 1;
                else
                    hi = mid;
            }
            eval(lo);
            Configuration best;
            for (auto& [idx, c] : seen)
                if (best.alpha == 0.0 || better(c, best)) best = c;
            return best;
        }
    }
    throw std::logic_error("best_configuration: unknown search mode");
}

struct EclipseResult {
    Schedule schedule;
    DemandMatrix residual;
    double total_time = 0.0;
};

/// Direct-routing greedy scheduler. Repeatedly extracts the configuration
/// with the best cost-adjusted utility and subtracts the served traffic,
/// until the packet switch can absorb what remains within the circuit time
/// already spent.
inline EclipseResult eclipse_schedule(const DemandMatrix& demand, const SystemParams& params,
                                      const SearchStrategy& strategy = {}) {
    check_params(params);
    if (demand.size() != params.n) throw std::invalid_argument("eclipse_schedule: size mismatch");
    if (!is_nonnegative(demand)) throw std::invalid_argument("eclipse_schedule: negative demand");

    Schedule schedule;
    Matrix remaining = demand;
    double t_c = 0.0;
    while (max_load(remaining) > params.packet_rate * t_c) {
        Configuration cfg = best_configuration(remaining, params, strategy);
        for (int i = 0; i < params.n; ++i) {
            int j = cfg.matching.output_of(i);
            if (j < 0) continue;
            remaining(i, j) -= std::min(cfg.alpha, remaining(i, j));
        }
        t_c += params.delta + cfg.alpha;
        schedule.steps.push_back({std::move(cfg.matching), cfg.alpha});
    }
    schedule.circuit_time = t_c;
    double total = transmission_time(t_c, remaining, params.packet_rate);
    return {std::move(schedule), std::move(remaining), total};
}

}  // namespace hybridsched
