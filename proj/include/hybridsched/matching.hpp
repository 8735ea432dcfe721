#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hybridsched/matrix.hpp"

namespace hybridsched {

/// One crossbar configuration: a set of input->output connections with no
/// shared input or output.
class Matching {
public:
    Matching() = default;
    explicit Matching(std::vector<int> to_output) : to_output_(std::move(to_output)) {}

    int size() const { return static_cast<int>(to_output_.size()); }

    /// Output connected to input i, or -1.
    int output_of(int i) const { return to_output_[i]; }

    std::vector<std::pair<int, int>> pairs() const {
        std::vector<std::pair<int, int>> out;
        for (int i = 0; i < size(); ++i)
            if (to_output_[i] >= 0) out.emplace_back(i, to_output_[i]);
        return out;
    }

    bool is_valid() const {
        std::vector<bool> used(to_output_.size(), false);
        for (int j : to_output_) {
            if (j < 0) continue;
            if (j >= size() || used[j]) return false;
            used[j] = true;
        }
        return true;
    }

    double weight(const Matrix& weights) const {
        double w = 0.0;
        for (int i = 0; i < size(); ++i)
            if (to_output_[i] >= 0) w += weights(i, to_output_[i]);
        return w;
    }

    bool operator==(const Matching& other) const = default;

private:
    std::vector<int> to_output_;
};

inline void check_weights(const Matrix& weights) {
    for (double v : weights.data())
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("matching: weights must be finite and nonnegative");
}

/// Exact maximum-weight full matching, O(n^3) shortest augmenting paths with
/// dual potentials. Deterministic: columns are scanned in ascending order and
/// ties keep the first candidate.
inline Matching max_weight_matching(const Matrix& weights) {
    check_weights(weights);
    const int n = weights.size();
    if (n == 0) return Matching{};

    constexpr double kInf = std::numeric_limits<double>::infinity();
    // minimization on negated weights, 1-indexed with a virtual column 0
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> match_row(n + 1, 0), way(n + 1, 0);
    std::vector<bool> used(n + 1);

    for (int i = 1; i <= n; ++i) {
        match_row[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), false);
        do {
            used[j0] = true;
            int i0 = match_row[j0], j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = -weights(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match_row[j0] != 0);
        do {
            int j1 = way[j0];
            match_row[j0] = match_row[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> to_output(n, -1);
    for (int j = 1; j <= n; ++j) to_output[match_row[j] - 1] = j - 1;
    return Matching(std::move(to_output));
}

/// Factorial-enumeration oracle. Permutations are tried in lexicographic
/// order of the input->output map and only strict improvements are kept, so
/// the result is the lexicographically smallest optimum.
inline Matching brute_force_mwm(const Matrix& weights) {
    check_weights(weights);
    const int n = weights.size();
    if (n > 9) throw std::invalid_argument("brute_force_mwm: refused for n > 9");
    if (n == 0) return Matching{};

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_weight = -1.0;
    do {
        double w = 0.0;
        for (int i = 0; i < n; ++i) w += weights(i, perm[i]);
        if (w > best_weight) {
            best_weight = w;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return Matching(std::move(best));
}

}  // namespace hybridsched
