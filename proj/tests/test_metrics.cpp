#include "trajacast/metrics.hpp"

#include "trajacast/synthdata.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace trajacast;

TEST(PointMetrics, Examples) {
    const auto m = point_metrics(std::vector<double>{110, 90}, std::vector<double>{100, 100});
    EXPECT_DOUBLE_EQ(m.mae, 10.0);
    EXPECT_DOUBLE_EQ(m.mape, 10.0);
    EXPECT_TRUE(m.mape_defined);
    EXPECT_EQ(m.n, 2u);
    const auto same = point_metrics(std::vector<double>{3, 4}, std::vector<double>{3, 4});
    EXPECT_DOUBLE_EQ(same.mae, 0.0);
    EXPECT_DOUBLE_EQ(same.mape, 0.0);
    const auto zero = point_metrics(std::vector<double>{1, 5}, std::vector<double>{0, 4});
    EXPECT_DOUBLE_EQ(zero.mae, 1.0);
    EXPECT_FALSE(zero.mape_defined);
    EXPECT_TRUE(std::isnan(zero.mape));
    EXPECT_THROW(point_metrics(std::vector<double>{1}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Winkler, Examples) {
    const PredictionInterval pi{100, 200, 0.05};
    EXPECT_DOUBLE_EQ(winkler_score(pi, 150, 0.05), 100.0);
    EXPECT_DOUBLE_EQ(winkler_score(pi, 210, 0.05), 500.0);
    EXPECT_DOUBLE_EQ(winkler_score(pi, 90, 0.05), 500.0);
    EXPECT_DOUBLE_EQ(winkler_score(pi, 200, 0.05), 100.0);
    EXPECT_DOUBLE_EQ(winkler_score(pi, 100, 0.05), 100.0);
}

TEST(Winkler, CoverageAndMean) {
    std::vector<PredictionInterval> pis(4, PredictionInterval{0, 10, 0.1});
    const auto m = interval_metrics(pis, std::vector<double>{1, 5, 10, 11}, 0.1);
    EXPECT_DOUBLE_EQ(m.uc, 0.75);
    EXPECT_DOUBLE_EQ(m.winkler, (10 + 10 + 10 + 30) / 4.0);
    EXPECT_EQ(m.n, 4u);
}

TEST(Winkler, MatchesIndependentOracle) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 5000; ++trial) {
        const auto v = testutil::random_values(rng, 3, -100, 100);
        const double lo = std::min(v[0], v[1]);
        const double hi = std::max(v[0], v[1]);
        const double y = v[2];
        const double alpha = testutil::random_values(rng, 1, 0.01, 0.5)[0];
        double expected = hi - lo;
        if (y < lo) {
            expected = (hi - lo) + 2.0 * (lo - y) / alpha;
        } else if (y > hi) {
            expected = (hi - lo) + 2.0 * (y - hi) / alpha;
        }
        ASSERT_NEAR(winkler_score({lo, hi, alpha}, y, alpha), expected, 1e-9);
    }
}

TEST(Dm, DegenerateCases) {
    std::vector<double> a(50), b(50);
    std::mt19937_64 rng(22);
    a = testutil::random_values(rng, 50, -5, 5);
    b = a;
    const auto equal = dm_test(a, b, Loss::Squared, 1);
    EXPECT_TRUE(equal.degenerate);
    EXPECT_DOUBLE_EQ(equal.p_value, 1.0);
    const std::vector<double> la(50, 3.0), lb(50, 2.0);
    const auto dominated = dm_test_losses(la, lb, 1);
    EXPECT_TRUE(dominated.degenerate);
    EXPECT_DOUBLE_EQ(dominated.p_value, 0.0);
    EXPECT_GT(dominated.statistic, 0.0);
}

TEST(Dm, InputChecks) {
    const std::vector<double> small(kDmMinSamples - 1, 1.0);
    EXPECT_THROW(dm_test(small, small, Loss::Absolute, 1), std::invalid_argument);
    const std::vector<double> a(40, 1.0), b(41, 1.0);
    EXPECT_THROW(dm_test(a, b, Loss::Absolute, 1), std::invalid_argument);
    EXPECT_THROW(dm_test(a, a, Loss::Absolute, 0), std::invalid_argument);
}

TEST(Dm, Antisymmetric) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = testutil::random_values(rng, 80, -10, 10);
        const auto b = testutil::random_values(rng, 80, -12, 12);
        for (std::size_t h : {1u, 3u}) {
            const auto ab = dm_test(a, b, Loss::Absolute, h);
            const auto ba = dm_test(b, a, Loss::Absolute, h);
            ASSERT_NEAR(ab.statistic, -ba.statistic, 1e-12);
            ASSERT_NEAR(ab.p_value, ba.p_value, 1e-12);
            ASSERT_GE(ab.p_value, 0.0);
            ASSERT_LE(ab.p_value, 1.0);
        }
    }
}

TEST(Dm, MatchesHandComputationForStepOne) {
    std::mt19937_64 rng(24);
    const auto la = testutil::random_values(rng, 60, 0, 10);
    const auto lb = testutil::random_values(rng, 60, 0, 10);
    const double n = 60.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < la.size(); ++i) {
        mean += la[i] - lb[i];
    }
    mean /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < la.size(); ++i) {
        var += (la[i] - lb[i] - mean) * (la[i] - lb[i] - mean);
    }
    var /= n;
    const double stat = mean / std::sqrt(var / n) * std::sqrt((n - 1.0) / n);
    const auto r = dm_test_losses(la, lb, 1);
    EXPECT_NEAR(r.statistic, stat, 1e-10);
    EXPECT_NEAR(r.p_value, std::erfc(std::fabs(stat) / std::sqrt(2.0)), 1e-10);
}

TEST(Dm, DetectsAConsistentlyWorseModel) {
    int rejections = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        NormalStream normal(seed);
        std::vector<double> a(500), b(500);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = std::fabs(normal.next());
            b[i] = a[i] + 0.5 + normal.next();
        }
        const auto r = dm_test_losses(b, a, 1);
        if (r.p_value < 0.05 && r.statistic > 0) {
            ++rejections;
        }
    }
    EXPECT_GT(rejections, 190);
}
