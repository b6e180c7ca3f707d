#include "trajacast/outliers.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace trajacast;

namespace {

// Entry i has distance i, so the input order is the distance order.
CandidateSet make(const std::vector<double>& values) {
    CandidateSet c;
    for (std::size_t i = 0; i < values.size(); ++i) {
        c.entries.push_back({values[i], static_cast<double>(i), 1000 - i});
    }
    c.requested = values.size();
    return c;
}

std::vector<double> sorted_values(const CandidateSet& c) {
    auto v = c.values();
    std::sort(v.begin(), v.end());
    return v;
}

void expect_distance_order(const CandidateSet& c) {
    for (std::size_t i = 1; i < c.size(); ++i) {
        EXPECT_TRUE(nearer(c.entries[i - 1], c.entries[i]));
    }
}

} // namespace

TEST(Winsorize, ReplacesExtremes) {
    EXPECT_EQ(sorted_values(winsorize(make({1, 5, 6, 100}))), (std::vector<double>{5, 5, 6, 6}));
    EXPECT_EQ(winsorize(make({7, 7, 7})).values(), (std::vector<double>{7, 7, 7}));
    EXPECT_THROW(winsorize(make({2, 9})), std::invalid_argument);
}

TEST(Winsorize, KeepsDistanceOrder) {
    const auto out = winsorize(make({100, 5, 1, 6}));
    EXPECT_EQ(out.values(), (std::vector<double>{6, 5, 5, 6}));
    expect_distance_order(out);
}

TEST(TailRemove, PercentileAndConstant) {
    const auto out = tail_remove(make({5, 1, 10, 2, 9, 3, 8, 4, 7, 6}), outlier::TailPercentile{0.2, 0.2});
    EXPECT_EQ(sorted_values(out), (std::vector<double>{3, 4, 5, 6, 7, 8}));
    expect_distance_order(out);
    EXPECT_EQ(sorted_values(tail_remove(make({3, 8, 20}), outlier::TailConstant{0, 1})), (std::vector<double>{3, 8}));
    const auto same = make({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    EXPECT_EQ(tail_remove(same, outlier::TailPercentile{0.04, 0.04}).entries, same.entries);
    EXPECT_THROW(tail_remove(make({1, 2}), outlier::TailConstant{1, 1}), std::invalid_argument);
}

TEST(ZScore, RemovesFarValues) {
    EXPECT_EQ(zscore_remove(make({10, 10, 10, 10, 100}), 1.5).values(), (std::vector<double>{10, 10, 10, 10}));
    EXPECT_EQ(zscore_remove(make({4, 4, 4}), 1.0).values(), (std::vector<double>{4, 4, 4}));
    EXPECT_EQ(zscore_remove(make({1, 9, 3, 7, 5}), 10.0).size(), 5u);
}

TEST(Policies, PermutationInvariantSubsets) {
    std::mt19937_64 rng(21);
    const std::vector<OutlierPolicy> policies{outlier::None{}, outlier::Winsorize{}, outlier::TailConstant{1, 2},
                                              outlier::TailPercentile{0.1, 0.2}, outlier::ZScore{1.0}};
    for (int trial = 0; trial < 200; ++trial) {
        CandidateSet c;
        const std::size_t n = 5 + rng() % 20;
        for (std::size_t i = 0; i < n; ++i) {
            c.entries.push_back({static_cast<double>(rng() % 30), static_cast<double>(rng() % 5), i + 1});
        }
        std::sort(c.entries.begin(), c.entries.end(), nearer);
        auto shuffled = c;
        std::shuffle(shuffled.entries.begin(), shuffled.entries.end(), rng);
        const auto lo = sorted_values(c).front();
        const auto hi = sorted_values(c).back();
        for (const auto& p : policies) {
            const auto a = apply_outlier_policy(c, p);
            auto b = apply_outlier_policy(shuffled, p);
            std::sort(b.entries.begin(), b.entries.end(), nearer);
            auto a_sorted = a.entries;
            std::sort(a_sorted.begin(), a_sorted.end(), nearer);
            ASSERT_EQ(a_sorted, b.entries) << to_string(p);
            ASSERT_LE(a.size(), c.size());
            if (preserves_size(p)) {
                ASSERT_EQ(a.size(), c.size());
            }
            for (const auto v : a.values()) {
                ASSERT_GE(v, lo);
                ASSERT_LE(v, hi);
            }
            if (!std::holds_alternative<outlier::Winsorize>(p)) {
                auto in = sorted_values(c);
                auto out = sorted_values(a);
                ASSERT_TRUE(std::includes(in.begin(), in.end(), out.begin(), out.end()));
            }
        }
    }
}

TEST(PolicyNames, RoundTrip) {
    for (const char* name : {"none", "winsor", "tailc:1:2", "tailp:0.1:0.2", "zscore:2"}) {
        EXPECT_EQ(to_string(parse_outlier_policy(name)), name);
    }
    EXPECT_THROW(parse_outlier_policy("tailp:0.6:0.5"), std::invalid_argument);
    EXPECT_THROW(parse_outlier_policy("mad"), std::invalid_argument);
}
