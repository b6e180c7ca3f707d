#include "trajacast/benchmarks.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace trajacast;

TEST(Naive, Examples) {
    const std::vector<double> x{5, 7, 120};
    EXPECT_DOUBLE_EQ(naive_forecast(x, 4), 120.0);
    EXPECT_DOUBLE_EQ(naive_forecast(x, 4, 2), 7.0);
    EXPECT_THROW(naive_forecast(x, 1), std::invalid_argument);
}

TEST(SeasonalNaive, OneDayBack) {
    std::vector<double> x(300);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = static_cast<double>(i + 1);
    }
    EXPECT_DOUBLE_EQ(seasonal_naive_forecast(x, 200, 96, 1), 104.0);
    EXPECT_DOUBLE_EQ(seasonal_naive_forecast(x, 250, 96, 2), (154.0 + 58.0) / 2.0);
    // Step beyond one period skips to the next day back.
    EXPECT_DOUBLE_EQ(seasonal_naive_forecast(x, 250, 96, 2, 100), 58.0);
    EXPECT_THROW(seasonal_naive_forecast(x, 250, 96, 1, 100), std::invalid_argument);
    EXPECT_THROW(seasonal_naive_forecast(x, 50, 96, 1), std::invalid_argument);
}

TEST(Ar, RecoversExactProcess) {
    std::vector<double> x{1.0};
    for (int i = 0; i < 40; ++i) {
        x.push_back(0.5 * x.back() + 3.0);
    }
    const auto m = fit_ar(x, 1);
    ASSERT_EQ(m.order(), 1u);
    EXPECT_NEAR(m.coefficients[0], 0.5, 1e-8);
    EXPECT_NEAR(m.intercept, 3.0, 1e-8);
    EXPECT_FALSE(m.ridge);
}

TEST(Ar, ConstantSeriesForecastsTheConstant) {
    const std::vector<double> x(50, 12.0);
    const auto m = fit_ar(x, 3);
    EXPECT_TRUE(m.ridge);
    EXPECT_NEAR(ar_forecast(m, std::vector<double>{12, 12, 12}), 12.0, 1e-6);
}

TEST(Ar, InputChecks) {
    EXPECT_THROW(fit_ar(std::vector<double>{1, 2, 3, 4}, 3), std::invalid_argument);
    EXPECT_THROW(fit_ar(std::vector<double>{1, 2, 3, 4, 5}, 0), std::invalid_argument);
    ArModel m{{0.5}, 0.0, false};
    EXPECT_THROW(ar_forecast(m, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Ar, ForecastExamples) {
    EXPECT_DOUBLE_EQ(ar_forecast(ArModel{{0.5}, 0.0, false}, std::vector<double>{10}), 5.0);
    EXPECT_DOUBLE_EQ(ar_forecast(ArModel{{0.0, 0.0}, 7.0, false}, std::vector<double>{3, 4}), 7.0);
    // α1 multiplies the most recent value.
    EXPECT_DOUBLE_EQ(ar_forecast(ArModel{{1.0, 0.0}, 0.0, false}, std::vector<double>{3, 4}), 4.0);
}

TEST(Ar, MultiStepFeedsForecastsBack) {
    const ArModel m{{0.5}, 3.0, false};
    EXPECT_DOUBLE_EQ(ar_forecast(m, std::vector<double>{10}, 1), 8.0);
    EXPECT_DOUBLE_EQ(ar_forecast(m, std::vector<double>{10}, 2), 7.0);
    EXPECT_DOUBLE_EQ(ar_forecast(m, std::vector<double>{10}, 3), 6.5);
    const ArModel two{{0.2, 0.3}, 1.0, false};
    const double f1 = 1.0 + 0.2 * 5 + 0.3 * 4;
    const double f2 = 1.0 + 0.2 * f1 + 0.3 * 5;
    EXPECT_NEAR(ar_forecast(two, std::vector<double>{4, 5}, 2), f2, 1e-12);
}

TEST(Ar, NoInterceptFit) {
    std::vector<double> x{100.0};
    for (int i = 0; i < 40; ++i) {
        x.push_back(0.8 * x.back() + (i % 2 == 0 ? 1.0 : -1.0));
    }
    const auto m = fit_ar(x, 1, false);
    EXPECT_DOUBLE_EQ(m.intercept, 0.0);
    EXPECT_NEAR(m.coefficients[0], 0.8, 0.05);
}
