#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "densify/occupancy.hpp"

using namespace densify;

namespace {

// Closed-form expectations computed independently in double precision
// (Python, p * (1 - (1 - 1/p)**n)).
constexpr double kOccupied32of64 = 25.334966658451663;
constexpr double kOccupied64of64 = 40.640862448389925;
constexpr double kOccupied128of64 = 55.4742295757025;

}  // namespace

TEST(CollisionPmf, ImpossibleLowCollisionCountsWhenOverfilled) {
    const auto pmf = collision_pmf({66, 64});
    EXPECT_EQ(pmf.probability(0), 0.0);
    EXPECT_EQ(pmf.probability(1), 0.0);
    EXPECT_GT(pmf.probability(2), 0.0);  // all 64 pixels lit
    EXPECT_EQ(pmf.mass.begin()->first, 2);
    EXPECT_EQ(pmf.mass.rbegin()->first, 65);
}

TEST(CollisionPmf, SmallCases) {
    for (std::int64_t p : {1, 7, 64, 4096}) {
        const auto one = collision_pmf({1, p});
        ASSERT_EQ(one.mass.size(), 1u);
        EXPECT_EQ(one.probability(0), 1.0);
    }
    const auto zero = collision_pmf({0, 10});
    ASSERT_EQ(zero.mass.size(), 1u);
    EXPECT_EQ(zero.probability(0), 1.0);

    const auto two = collision_pmf({2, 2});
    EXPECT_EQ(two.probability(0), 0.5);
    EXPECT_EQ(two.probability(1), 0.5);

    EXPECT_DOUBLE_EQ(collision_pmf({3, 4}).probability(2), 4.0 / 64.0);
}

TEST(CollisionPmf, RejectsOutOfRange) {
    EXPECT_THROW(collision_pmf({3, 0}), DomainError);
    EXPECT_THROW(collision_pmf({-1, 4}), DomainError);
    EXPECT_THROW(collision_pmf({513, 64}), SizeError);
    EXPECT_THROW(collision_pmf({10, 4097}), SizeError);
    EXPECT_NO_THROW(collision_pmf({512, 4096}));
}

TEST(BruteForcePmf, WorkedExamples) {
    const auto two = brute_force_counts({2, 2});
    EXPECT_EQ(two.total, 4);
    EXPECT_EQ(two.counts.at(0), 2);
    EXPECT_EQ(two.counts.at(1), 2);

    const auto three = brute_force_counts({3, 3});
    EXPECT_EQ(three.total, 27);
    EXPECT_EQ(three.counts.at(0), 6);

    const auto four = brute_force_counts({4, 2});
    EXPECT_EQ(four.total, 16);
    EXPECT_EQ(four.counts.at(3), 2);
    EXPECT_DOUBLE_EQ(brute_force_pmf({4, 2}).probability(3), 2.0 / 16.0);
}

TEST(BruteForcePmf, RefusesHugeEnumerations) {
    EXPECT_THROW(brute_force_counts({9, 7}), SizeError);  // 7^9 > 10^7
    EXPECT_NO_THROW(brute_force_counts({8, 6}));
}

TEST(CollisionPmf, MatchesEnumerationExactly) {
    for (std::int64_t n = 0; n <= 8; ++n) {
        for (std::int64_t p = 1; p <= 6; ++p) {
            const auto exact = collision_counts({n, p});
            const auto brute = brute_force_counts({n, p});
            EXPECT_EQ(exact, brute) << "n=" << n << " p=" << p;
        }
    }
}

TEST(CollisionPmf, SupportBounds) {
    for (auto [n, p] : std::vector<std::pair<std::int64_t, std::int64_t>>{{5, 3}, {3, 5}, {40, 16}, {16, 40}}) {
        const auto pmf = collision_pmf({n, p});
        EXPECT_EQ(pmf.mass.begin()->first, std::max<std::int64_t>(0, n - p));
        EXPECT_EQ(pmf.mass.rbegin()->first, n - 1);
        for (const auto& [k, pr] : pmf.mass) {
            EXPECT_GT(pr, 0.0);
            EXPECT_LE(pr, 1.0);
        }
    }
}

TEST(CollisionPmf, SumsToOneAndMeanMatchesClosedForm) {
    const std::vector<std::pair<std::int64_t, std::int64_t>> cases = {
        {1, 1}, {10, 1}, {7, 3}, {64, 64}, {128, 64}, {66, 64}, {256, 64}, {100, 1000}, {300, 16}, {512, 4096}};
    for (auto [n, p] : cases) {
        const auto pmf = collision_pmf({n, p});
        EXPECT_NEAR(pmf.sum(), 1.0, 1e-9) << n << "," << p;
        const double expected_collisions = static_cast<double>(n) - expected_occupied(n, p);
        EXPECT_NEAR(pmf.mean(), expected_collisions, 1e-6 * std::max(1.0, expected_collisions)) << n << "," << p;
    }
}

TEST(RatioToDouble, HandlesHugeOperands) {
    const BigInt den = pow(BigInt(4096), 512);
    EXPECT_DOUBLE_EQ(ratio_to_double(den / 4, den), 0.25);
    EXPECT_DOUBLE_EQ(ratio_to_double(BigInt(1), BigInt(3)), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(ratio_to_double(BigInt(-6), BigInt(4)), -1.5);
    EXPECT_EQ(ratio_to_double(BigInt(0), den), 0.0);
}

TEST(ExpectedOccupied, CollisionCurveAnchors) {
    EXPECT_NEAR(expected_occupied(128, 64), kOccupied128of64, 1e-12);
    EXPECT_NEAR(expected_occupied(64, 64), kOccupied64of64, 1e-12);
    EXPECT_NEAR(expected_occupied(32, 64), kOccupied32of64, 1e-12);
    EXPECT_EQ(expected_occupied(0, 64), 0.0);

    // Simulation estimates these within 0.15: 55.43, 40.55, 25.32.
    EXPECT_NEAR(expected_occupied(128, 64), 55.43, 0.15);
    EXPECT_NEAR(expected_occupied(64, 64), 40.55, 0.15);
    EXPECT_NEAR(expected_occupied(32, 64), 25.32, 0.15);
}

TEST(ExpectedOccupied, ScalarTypesAgree) {
    EXPECT_NEAR(static_cast<double>(expected_occupied<long double>(128, 64)), kOccupied128of64, 1e-12);
    EXPECT_NEAR(expected_occupied<float>(128, 64), kOccupied128of64, 1e-4);
}

TEST(ExpectedOccupied, MonotoneAndBounded) {
    for (std::int64_t p : {1, 2, 3, 16, 64, 1000}) {
        double prev = -1.0;
        for (std::int64_t n = 0; n <= 4 * p; ++n) {
            const double e = expected_occupied(n, p);
            EXPECT_LE(e, static_cast<double>(std::min(n, p)) + 1e-12);
            EXPECT_GE(e, 0.0);
            if (p > 1 || n <= 1) {
                EXPECT_GT(e, prev) << "n=" << n << " p=" << p;
            }
            prev = e;
        }
    }
}

TEST(ExpectedOccupied, MonteCarloAgreement) {
    std::mt19937_64 rng(12345);
    const int trials = 100000;
    for (auto [n, p] : std::vector<std::pair<int, int>>{{64, 64}, {128, 64}, {20, 16}}) {
        std::uniform_int_distribution<int> pixel(0, p - 1);
        std::vector<char> lit(static_cast<std::size_t>(p));
        double sum = 0.0, sum_sq = 0.0;
        for (int t = 0; t < trials; ++t) {
            std::fill(lit.begin(), lit.end(), 0);
            int distinct = 0;
            for (int i = 0; i < n; ++i) {
                auto& cell = lit[static_cast<std::size_t>(pixel(rng))];
                if (!cell) {
                    cell = 1;
                    ++distinct;
                }
            }
            sum += distinct;
            sum_sq += static_cast<double>(distinct) * distinct;
        }
        const double mean = sum / trials;
        const double var = sum_sq / trials - mean * mean;
        const double se = std::sqrt(var / trials);
        EXPECT_NEAR(mean, expected_occupied(n, p), 3.0 * se) << "n=" << n << " p=" << p;
    }
}

TEST(OccupancySummary, Identities) {
    for (auto [n, p] : std::vector<std::pair<std::int64_t, std::int64_t>>{{0, 64}, {128, 64}, {5, 1000}, {300, 7}}) {
        const auto s = occupancy_summary({n, p});
        EXPECT_DOUBLE_EQ(s.expected_occupied + s.expected_free, static_cast<double>(p));
        EXPECT_DOUBLE_EQ(s.expected_occupied + s.expected_collisions, static_cast<double>(n));
        EXPECT_GE(s.expected_occupied, 0.0);
        EXPECT_LE(s.expected_occupied, static_cast<double>(std::min(n, p)));
    }
}

TEST(OccupancySummary, WorkedExamples) {
    const auto s = occupancy_summary({128, 64});
    EXPECT_NEAR(s.expected_collisions, 72.5, 0.1);
    EXPECT_NEAR(100.0 * s.collision_fraction, 56.7, 0.2);
    EXPECT_NEAR(s.expected_free, 8.5, 0.1);
    EXPECT_NEAR(100.0 * s.free_fraction, 13.3, 0.2);

    const auto empty = occupancy_summary({0, 64});
    EXPECT_EQ(empty.expected_collisions, 0.0);
    EXPECT_EQ(empty.expected_free, 64.0);
    EXPECT_EQ(empty.free_fraction, 1.0);

    const auto saturated = occupancy_summary({256, 64});
    EXPECT_NEAR(100.0 * saturated.free_fraction, 1.6, 0.5);
}

TEST(InverseOccupancy, Examples) {
    EXPECT_EQ(inverse_occupancy(1.0, 64), 1);
    EXPECT_EQ(inverse_occupancy(40.64, 64), 64);
    EXPECT_EQ(inverse_occupancy(0.0, 16), 0);
    EXPECT_EQ(inverse_occupancy(12.0, 16), 21);
    EXPECT_EQ(inverse_occupancy(16.0, 16), kRetainAll);
    EXPECT_EQ(inverse_occupancy(0.5, 1), 0);  // tie between 0 and 1 goes low
}

TEST(InverseOccupancy, RejectsOutOfRangeTargets) {
    EXPECT_THROW(inverse_occupancy(-0.1, 16), DomainError);
    EXPECT_THROW(inverse_occupancy(16.5, 16), DomainError);
    EXPECT_THROW(inverse_occupancy(1.0, 0), DomainError);
}

TEST(InverseOccupancy, RoundTripsForwardValues) {
    for (std::int64_t p = 2; p <= 80; ++p) {
        for (std::int64_t n = 0; n <= 4 * p; ++n) {
            ASSERT_EQ(inverse_occupancy(expected_occupied(n, p), p), n) << "n=" << n << " p=" << p;
        }
    }
}

TEST(InverseOccupancy, NearestWithLowTieBreak) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const std::int64_t p = 1 + static_cast<std::int64_t>(frac(rng) * 100);
        const double target = frac(rng) * static_cast<double>(p) * 0.999;
        const std::int64_t n = inverse_occupancy(target, p);
        const double err = std::abs(expected_occupied(n, p) - target);
        if (n > 0) {
            EXPECT_LT(err, std::abs(expected_occupied(n - 1, p) - target));
        }
        EXPECT_LE(err, std::abs(expected_occupied(n + 1, p) - target));
    }
}

TEST(UniformRatioForDecay, WorkedExample) {
    const auto fit = uniform_ratio_for_decay(64, 128, 64, 0.20);
    EXPECT_TRUE(fit.satisfied);
    EXPECT_DOUBLE_EQ(fit.ratio, 0.5);
    EXPECT_EQ(fit.kept_high, 64);
    EXPECT_EQ(fit.kept_low, 32);
    EXPECT_NEAR(fit.displayed_ratio, 1.6, 0.02);
    EXPECT_LE(fit.decay, 0.20);
}

TEST(UniformRatioForDecay, AlreadySatisfied) {
    const auto fit = uniform_ratio_for_decay(1, 2, 64, 0.5);
    EXPECT_TRUE(fit.satisfied);
    EXPECT_EQ(fit.ratio, 1.0);
}

TEST(UniformRatioForDecay, TighterBoundSamplesHarder) {
    // Sweep oracle: the largest j on the 1/128 grid whose displayed ratio
    // meets the bound.
    auto ratio_at = [](std::int64_t j) {
        const std::int64_t low = static_cast<std::int64_t>(std::floor(j * 64.0 / 128.0 + 0.5));
        return expected_occupied(j, 64) / expected_occupied(low, 64);
    };
    std::int64_t best = 0;
    for (std::int64_t j = 2; j <= 128; ++j) {
        if (ratio_at(j) >= 2.0 * 0.95) best = j;
    }
    const auto fit = uniform_ratio_for_decay(64, 128, 64, 0.05);
    EXPECT_TRUE(fit.satisfied);
    EXPECT_LT(fit.ratio, 0.5);
    EXPECT_EQ(fit.kept_high, best);
}

TEST(UniformRatioForDecay, ReportsLeastDecayWhenUnreachable) {
    // Two points on one pixel always collapse to the same single pixel.
    const auto fit = uniform_ratio_for_decay(1, 2, 1, 0.1);
    EXPECT_FALSE(fit.satisfied);
    EXPECT_NEAR(fit.decay, 0.5, 1e-12);
}

TEST(UniformRatioForDecay, RejectsBadArguments) {
    EXPECT_THROW(uniform_ratio_for_decay(10, 5, 64, 0.2), DomainError);
    EXPECT_THROW(uniform_ratio_for_decay(0, 5, 64, 0.2), DomainError);
    EXPECT_THROW(uniform_ratio_for_decay(5, 10, 64, 1.0), DomainError);
}
