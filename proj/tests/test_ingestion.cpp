#include "trajacast/ingestion.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace trajacast;

namespace {

RawSeries raw15(const std::vector<std::optional<double>>& flows, Timestamp start = testutil::monday()) {
    RawSeries raw;
    raw.cadence = std::chrono::minutes{15};
    for (std::size_t i = 0; i < flows.size(); ++i) {
        raw.records.push_back({start + std::chrono::minutes{15 * static_cast<long>(i)}, flows[i]});
    }
    return raw;
}

RawSeries raw5(const std::vector<std::optional<double>>& flows, Timestamp start = testutil::monday()) {
    auto raw = raw15(flows, start);
    raw.cadence = std::chrono::minutes{5};
    for (std::size_t i = 0; i < raw.records.size(); ++i) {
        raw.records[i].time = start + std::chrono::minutes{5 * static_cast<long>(i)};
    }
    return raw;
}

std::vector<std::optional<double>> ramp(std::size_t n) {
    std::vector<std::optional<double>> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = static_cast<double>(i % 700);
    }
    return v;
}

} // namespace

TEST(ParseCsv, ReadsRowsAndMissingCells) {
    const auto dir = testutil::temp_dir("parse");
    const auto path = testutil::write_file(dir / "a.csv",
                                           "timestamp,flow,speed\n"
                                           "2021-01-04 00:10:00,30,60\n"
                                           "2021-01-04 00:00:00,10,60\n"
                                           "2021-01-04 00:05:00,,60\n"
                                           "2021-01-04 00:15:00,NA,60\n");
    ColumnMap columns;
    columns.missing_token = "NA";
    const auto raw = parse_csv(path, columns);
    ASSERT_EQ(raw.records.size(), 4u);
    EXPECT_EQ(raw.records[0].flow, 10.0);
    EXPECT_FALSE(raw.records[1].flow.has_value());
    EXPECT_EQ(raw.records[2].flow, 30.0);
    EXPECT_FALSE(raw.records[3].flow.has_value());
    EXPECT_EQ(raw.cadence, std::chrono::minutes{5});
    EXPECT_EQ(raw.missing_count(), 2u);
}

TEST(ParseCsv, CustomColumnsAndErrors) {
    const auto dir = testutil::temp_dir("parse_err");
    ColumnMap columns{"Timestamp", "Total Flow", "", ""};
    const auto ok = testutil::write_file(dir / "ok.csv", "Timestamp,Total Flow\n01/04/2021 00:00:00,5\n");
    EXPECT_EQ(parse_csv(ok, columns).records.size(), 1u);

    const auto dup = testutil::write_file(dir / "dup.csv", "timestamp,flow\n2021-01-04T00:00,1\n2021-01-04T00:00,2\n");
    try {
        parse_csv(dup, ColumnMap{});
        FAIL() << "expected duplicate error";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("duplicate timestamp"), std::string::npos);
    }
    const auto none = testutil::write_file(dir / "none.csv", "timestamp,flow\nbad,1\n");
    EXPECT_THROW(parse_csv(none, ColumnMap{}), std::runtime_error);
    EXPECT_THROW(parse_csv(dir / "absent.csv", ColumnMap{}), std::runtime_error);
}

TEST(Aggregate, SumsTriples) {
    const auto out = aggregate_15min(raw5({10, 20, 30, 5, 5, 5}));
    ASSERT_EQ(out.records.size(), 2u);
    EXPECT_EQ(out.records[0].flow, 60.0);
    EXPECT_EQ(out.records[1].flow, 15.0);
    EXPECT_EQ(out.cadence, std::chrono::minutes{15});
}

TEST(Aggregate, MissingPropagatesAndPartialTuplesDrop) {
    EXPECT_FALSE(aggregate_15min(raw5({10, std::nullopt, 30})).records[0].flow.has_value());
    EXPECT_EQ(aggregate_15min(raw5({1, 2, 3, 4, 5, 6, 7})).records.size(), 2u);
    // Starting at 00:05 drops the leading partial tuple.
    const auto shifted = aggregate_15min(raw5({1, 1, 2, 2, 2, 9}, testutil::monday() + std::chrono::minutes{5}));
    ASSERT_EQ(shifted.records.size(), 1u);
    EXPECT_EQ(shifted.records[0].flow, 6.0);
    EXPECT_EQ(slot_of_day(shifted.records[0].time), 1);
}

TEST(Aggregate, RejectsOtherCadence) {
    EXPECT_THROW(aggregate_15min(raw15({1, 2, 3})), std::invalid_argument);
}

TEST(Aggregate, PreservesTotalsOfCompleteTuples) {
    std::mt19937_64 rng(3);
    std::vector<std::optional<double>> flows(300);
    double total = 0.0;
    for (std::size_t i = 0; i < flows.size(); ++i) {
        if (rng() % 10 == 0) {
            continue;
        }
        flows[i] = static_cast<double>(rng() % 50);
    }
    for (std::size_t k = 0; k < 100; ++k) {
        if (flows[3 * k] && flows[3 * k + 1] && flows[3 * k + 2]) {
            total += *flows[3 * k] + *flows[3 * k + 1] + *flows[3 * k + 2];
        }
    }
    double out_total = 0.0;
    for (const auto& r : aggregate_15min(raw5(flows)).records) {
        out_total += r.flow.value_or(0.0);
    }
    EXPECT_EQ(out_total, total);
}

TEST(Impute, ShortGapUsesPreviousWeek) {
    auto flows = ramp(kSlotsPerWeek * 4);
    const std::size_t k = kSlotsPerWeek * 3 + 10;
    flows[k] = std::nullopt;
    const auto result = impute_missing_with_report(raw15(flows));
    EXPECT_EQ(result.series.at(k + 1), *flows[k - kSlotsPerWeek]);
    EXPECT_EQ(result.report.previous_week, 1u);
    EXPECT_EQ(result.report.three_week_mean, 0u);
}

TEST(Impute, LongGapUsesThreeWeekMean) {
    auto flows = ramp(kSlotsPerWeek * 4);
    const std::size_t k = kSlotsPerWeek * 3 + 100;
    for (std::size_t i = 0; i < 8; ++i) {
        flows[k + i] = std::nullopt;
        flows[k + i - kSlotsPerWeek] = 110.0 + static_cast<double>(i);
        flows[k + i - 2 * kSlotsPerWeek] = 100.0 + static_cast<double>(i);
        flows[k + i - 3 * kSlotsPerWeek] = 90.0 + static_cast<double>(i);
    }
    const auto result = impute_missing_with_report(raw15(flows));
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_DOUBLE_EQ(result.series.at(k + i + 1), 100.0 + static_cast<double>(i));
    }
    EXPECT_EQ(result.report.three_week_mean, 8u);
}

TEST(Impute, FourSlotsIsALongGapThreeIsShort) {
    auto flows = ramp(kSlotsPerWeek * 4);
    const std::size_t k = kSlotsPerWeek * 3 + 200;
    for (std::size_t i = 0; i < 3; ++i) {
        flows[k + i] = std::nullopt;
    }
    for (std::size_t i = 0; i < 4; ++i) {
        flows[k + 50 + i] = std::nullopt;
    }
    const auto report = impute_missing_with_report(raw15(flows)).report;
    EXPECT_EQ(report.previous_week, 3u);
    EXPECT_EQ(report.three_week_mean, 4u);
}

TEST(Impute, IdentityIdempotenceAndPreservation) {
    auto flows = ramp(kSlotsPerWeek * 5);
    const auto clean = impute_missing(raw15(flows));
    for (std::size_t i = 0; i < flows.size(); ++i) {
        ASSERT_EQ(clean.at(i + 1), *flows[i]);
    }
    flows[kSlotsPerWeek * 4 + 7] = std::nullopt;
    flows[kSlotsPerWeek * 3 + 1] = std::nullopt;
    const auto once = impute_missing(raw15(flows));
    const auto twice = impute_missing(to_raw(once));
    ASSERT_EQ(once.size(), twice.size());
    for (std::size_t i = 1; i <= once.size(); ++i) {
        ASSERT_EQ(once.at(i), twice.at(i));
        if (flows[i - 1]) {
            ASSERT_EQ(once.at(i), *flows[i - 1]);
        }
    }
}

TEST(Impute, CascadingGapsUseImputedDonors) {
    auto flows = ramp(kSlotsPerWeek * 5);
    const std::size_t k = kSlotsPerWeek * 3 + 5;
    flows[k] = std::nullopt;
    flows[k + kSlotsPerWeek] = std::nullopt;
    const auto ts = impute_missing(raw15(flows));
    EXPECT_EQ(ts.at(k + 1 + kSlotsPerWeek), ts.at(k + 1));
    EXPECT_EQ(ts.at(k + 1), *flows[k - kSlotsPerWeek]);
}

TEST(Impute, MissingInFirstThreeWeeksIsAnError) {
    auto flows = ramp(kSlotsPerWeek * 4);
    flows[kSlotsPerWeek * 3 - 1] = std::nullopt;
    EXPECT_THROW(impute_missing(raw15(flows)), std::invalid_argument);
}

TEST(SeriesFile, RoundTrips) {
    const auto dir = testutil::temp_dir("series_file");
    const auto ts = testutil::series({1.5, 2, 1e6, 0.1});
    write_series_csv(dir / "s.csv", ts);
    const auto back = read_series_csv(dir / "s.csv");
    ASSERT_EQ(back.size(), ts.size());
    EXPECT_EQ(back.start(), ts.start());
    for (std::size_t i = 1; i <= ts.size(); ++i) {
        EXPECT_EQ(back.at(i), ts.at(i));
    }
}
