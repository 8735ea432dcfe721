#include <gtest/gtest.h>

#include "hybridsched/matching.hpp"
#include "hybridsched/random.hpp"

namespace hybridsched {
namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(static_cast<int>(rows.size()));
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) m(i, j) = rows[i][j];
    return m;
}

Matrix random_weights(Rng& rng, int n, bool integer) {
    Matrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = integer ? static_cast<double>(rng.below(21)) : rng.uniform01() * 10.0;
    return m;
}

TEST(Matching, DominantDiagonal) {
    Matrix w = from_rows({{7, 1, 1}, {1, 7, 1}, {1, 1, 7}});
    Matching m = max_weight_matching(w);
    EXPECT_EQ(m.pairs(), (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}}));
    EXPECT_DOUBLE_EQ(m.weight(w), 21.0);
    EXPECT_DOUBLE_EQ(brute_force_mwm(w).weight(w), 21.0);
}

TEST(Matching, TwoByTwoHandCase) {
    Matrix w = from_rows({{1, 2}, {3, 5}});
    Matching m = max_weight_matching(w);
    EXPECT_EQ(m.pairs(), (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}}));
    EXPECT_DOUBLE_EQ(m.weight(w), 6.0);
    EXPECT_EQ(brute_force_mwm(w).pairs(), m.pairs());
}

TEST(Matching, AllZeroWeights) {
    Matrix w(3, 0.0);
    Matching m = max_weight_matching(w);
    EXPECT_TRUE(m.is_valid());
    EXPECT_DOUBLE_EQ(m.weight(w), 0.0);
}

TEST(Matching, SingleElement) {
    Matrix w = from_rows({{4}});
    Matching m = brute_force_mwm(w);
    EXPECT_EQ(m.pairs(), (std::vector<std::pair<int, int>>{{0, 0}}));
    EXPECT_DOUBLE_EQ(m.weight(w), 4.0);
}

TEST(Matching, BruteForceRefusesLargeInstances) {
    EXPECT_THROW(brute_force_mwm(Matrix(10, 1.0)), std::invalid_argument);
}

TEST(Matching, NegativeWeightRejected) {
    Matrix w(2, 1.0);
    w(0, 1) = -0.5;
    EXPECT_THROW(max_weight_matching(w), std::invalid_argument);
    EXPECT_THROW(brute_force_mwm(w), std::invalid_argument);
}

TEST(Matching, BruteForceBreaksTiesLexicographically) {
    Matching m = brute_force_mwm(Matrix(3, 1.0));
    EXPECT_EQ(m.pairs(), (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}}));
}

TEST(Matching, OracleEqualityOnIntegerWeights) {
    Rng rng(7);
    for (int n = 2; n <= 7; ++n) {
        for (int trial = 0; trial < 40; ++trial) {
            Matrix w = random_weights(rng, n, true);
            Matching fast = max_weight_matching(w);
            Matching slow = brute_force_mwm(w);
            ASSERT_TRUE(fast.is_valid());
            ASSERT_DOUBLE_EQ(fast.weight(w), slow.weight(w)) << "n=" << n << " trial=" << trial;
        }
    }
}

TEST(Matching, OracleEqualityOnRealWeights) {
    Rng rng(11);
    for (int n = 2; n <= 7; ++n) {
        for (int trial = 0; trial < 40; ++trial) {
            Matrix w = random_weights(rng, n, false);
            double fast = max_weight_matching(w).weight(w);
            double slow = brute_force_mwm(w).weight(w);
            ASSERT_NEAR(fast, slow, 1e-9 * std::max(1.0, slow)) << "n=" << n << " trial=" << trial;
        }
    }
}

TEST(Matching, DeterministicAndScaleInvariant) {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix w = random_weights(rng, 6, true);
        Matching a = max_weight_matching(w);
        Matching b = max_weight_matching(w);
        EXPECT_EQ(a.pairs(), b.pairs());
        // power-of-two scaling keeps every comparison exact
        Matrix scaled(6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) scaled(i, j) = w(i, j) * 4.0;
        EXPECT_EQ(max_weight_matching(scaled).pairs(), a.pairs());
    }
}

}  // namespace
}  // namespace hybridsched
