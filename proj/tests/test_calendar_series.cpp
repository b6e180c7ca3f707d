#include "trajacast/calendar.hpp"
#include "trajacast/series.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace trajacast;

TEST(Calendar, ParsesIsoAndUsFormats) {
    const auto a = parse_timestamp("2021-10-05T14:45");
    const auto b = parse_timestamp("2021-10-05 14:45:00");
    const auto c = parse_timestamp("10/05/2021 14:45:00");
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    EXPECT_EQ(format_timestamp(a), "2021-10-05T14:45:00");
    EXPECT_EQ(minute_of_day(a), 14 * 60 + 45);
    EXPECT_EQ(slot_of_day(a), 59);
}

TEST(Calendar, ExplicitFormatAndErrors) {
    EXPECT_EQ(parse_timestamp("05.10.2021 01:15", "%d.%m.%Y %H:%M"), parse_timestamp("2021-10-05T01:15"));
    EXPECT_THROW(parse_timestamp("yesterday"), std::invalid_argument);
}

TEST(TimeSeries, IndexingIsOneBased) {
    const auto ts = testutil::series({1, 2, 3, 4}, parse_timestamp("2020-01-06T23:30"));
    EXPECT_EQ(ts.at(1), 1);
    EXPECT_EQ(ts.at(4), 4);
    EXPECT_EQ(ts.start_slot(), 94);
    EXPECT_EQ(ts.slot_at(3), 0);
    EXPECT_EQ(format_timestamp(ts.time_at(3)), "2020-01-07T00:00:00");
    EXPECT_EQ(ts.index_at_or_after(parse_timestamp("2020-01-06T23:50")), 3u);
    EXPECT_EQ(ts.index_at_or_after(parse_timestamp("2020-02-01T00:00")), 5u);
}

TEST(TimeSeries, RejectsInvalidValues) {
    EXPECT_THROW(testutil::series({}), std::invalid_argument);
    EXPECT_THROW(testutil::series({1, -1}), std::invalid_argument);
    EXPECT_THROW(testutil::series({1, std::nan("")}), std::invalid_argument);
}
