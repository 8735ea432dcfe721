#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace hybridsched {

/// Seedable random source. Wraps std::mt19937_64 but derives every variate
/// from raw 64-bit draws, so results do not depend on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe as a log() argument.
    double uniform_open01() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Standard normal via Box-Muller. Consumes two draws per value.
    double gaussian() {
        double u1 = uniform_open01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform integer in [0, bound), rejection-sampled.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
};

inline std::vector<int> random_permutation(Rng& rng, int n) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) {
        int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[i], perm[k]);
    }
    return perm;
}

/// Uniform permutation with no fixed points, by rejection (acceptance ~1/e).
inline std::vector<int> random_derangement(Rng& rng, int n) {
    if (n < 2) throw std::invalid_argument("random_derangement: need n >= 2");
    for (;;) {
        std::vector<int> perm = random_permutation(rng, n);
        bool fixed = false;
        for (int i = 0; i < n; ++i) {
            if (perm[i] == i) {
                fixed = true;
                break;
            }
        }
        if (!fixed) return perm;
    }
}

}  // namespace hybridsched
