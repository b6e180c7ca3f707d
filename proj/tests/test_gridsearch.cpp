#include "trajacast/gridsearch.hpp"

#include "trajacast/metrics.hpp"
#include "trajacast/synthdata.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

using namespace trajacast;

namespace {

struct Fixture {
    TimeSeries series = generate(SynthSpec{synth::TwoRegime{}, kSlotsPerDay * 14, 23});
    SeriesContext ctx{&series, make_target_split(series.size(), 401, 873), ReferenceFloor::EqualHistory};
};

GridSpec small_grid() {
    GridSpec g;
    g.windows = {2, 4, 6};
    g.neighbors = {5, 20};
    g.radii = {std::nullopt, 2};
    g.models = parse_model_list("mean,m1:f2,m3");
    return g;
}

std::string csv(const Leaderboard& board) {
    std::ostringstream out;
    write_leaderboard_csv(out, board);
    return out.str();
}

} // namespace

TEST(GridLists, Parsing) {
    EXPECT_EQ(parse_count_list("2-5"), (std::vector<std::size_t>{2, 3, 4, 5}));
    EXPECT_EQ(parse_count_list("5-20/5"), (std::vector<std::size_t>{5, 10, 15, 20}));
    EXPECT_EQ(parse_count_list("10,25"), (std::vector<std::size_t>{10, 25}));
    EXPECT_THROW(parse_count_list("5-2"), std::invalid_argument);
    EXPECT_THROW(parse_count_list(""), std::invalid_argument);
    const auto radii = parse_radius_list("none,0,3");
    ASSERT_EQ(radii.size(), 3u);
    EXPECT_FALSE(radii[0]);
    EXPECT_EQ(radii[2], 3);
    EXPECT_EQ(parse_model_list("m1:*").size(), 5u);
    EXPECT_EQ(parse_model_list("m2:*,mean").size(), 5u);
    EXPECT_EQ(parse_distance_list("euclidean,manhattan").size(), 2u);
    EXPECT_EQ(parse_outlier_list("none,winsor").size(), 2u);
    EXPECT_EQ(parse_objective("winkler"), Objective::Winkler);
    EXPECT_THROW(parse_objective("rmse"), std::invalid_argument);
}

TEST(GridSpecCells, DefaultsAndOrder) {
    const auto d = GridSpec::defaults();
    EXPECT_EQ(d.windows.front(), 2u);
    EXPECT_EQ(d.windows.back(), 20u);
    EXPECT_EQ(d.neighbors.size(), 40u);
    EXPECT_EQ(d.cells().size(), 19u * 40u);
    const auto cells = small_grid().cells();
    ASSERT_EQ(cells.size(), 3u * 3u * 2u * 2u);
    EXPECT_EQ(cells[0].window, 2u);
    EXPECT_EQ(cells[0].neighbors, 5u);
    EXPECT_FALSE(cells[0].radius);
    EXPECT_EQ(cells[1].radius, 2);
    EXPECT_EQ(cells[2].neighbors, 20u);
}

TEST(Grid, TuneMetricIsTheTuneMae) {
    Fixture f;
    HyperParams hp;
    hp.window = 4;
    hp.neighbors = 10;
    const auto plan = plan_similarity(f.ctx, hp);
    const auto targets = side_targets(f.ctx, Side::Tune);
    ASSERT_EQ(targets.size(), f.ctx.targets.query_count());
    std::vector<double> forecasts, actuals;
    for (auto t : targets) {
        forecasts.push_back(forecast_similarity(plan, f.ctx, t));
        actuals.push_back(f.series.values()[t - 1]);
    }
    EXPECT_NEAR(evaluate_targets(plan, f.ctx, targets, EvalOptions{}, 1), point_metrics(forecasts, actuals).mae, 1e-9);
    const auto hour5 = side_targets(f.ctx, Side::Test, 5);
    EXPECT_EQ(hour5.size(), 4u * 5u);
    for (auto t : hour5) {
        EXPECT_EQ(f.ctx.hour_of(t), 5);
    }
}

TEST(Grid, SortedByTuneMetricAndDeterministicAcrossJobs) {
    Fixture f;
    EvalOptions one;
    one.jobs = 1;
    EvalOptions many = one;
    many.jobs = 4;
    const auto a = run_grid(small_grid(), f.ctx, one);
    const auto b = run_grid(small_grid(), f.ctx, many);
    EXPECT_EQ(csv(a), csv(b));
    for (std::size_t i = 1; i < a.rows.size(); ++i) {
        if (a.rows[i].ok() && a.rows[i - 1].ok()) {
            ASSERT_LE(a.rows[i - 1].tune_metric, a.rows[i].tune_metric);
        }
    }
    EXPECT_EQ(a.selected().tune_metric, a.rows.front().tune_metric);
}

TEST(Grid, DominantCellIsSelected) {
    // On exactly periodic data the same-slot neighbour is perfect.
    const auto series = generate(SynthSpec{synth::PeriodicExact{96}, kSlotsPerDay * 12, 5});
    const SeriesContext ctx{&series, make_target_split(series.size(), 385, 769), ReferenceFloor::EqualHistory};
    GridSpec g;
    g.windows = {4};
    g.neighbors = {1, 30};
    const auto board = run_grid(g, ctx, EvalOptions{});
    EXPECT_EQ(board.selected().hp.neighbors, 1u);
    EXPECT_NEAR(board.selected().tune_metric, 0.0, 1e-9);
}

TEST(Grid, TestSideNeverAffectsSelection) {
    Fixture f;
    std::vector<double> v(f.series.values().begin(), f.series.values().end());
    for (std::size_t i = f.ctx.targets.test_first_target - 1; i < v.size(); ++i) {
        v[i] = v[i] * 3.0 + 50.0;
    }
    const TimeSeries changed(f.series.start(), v);
    const SeriesContext cctx{&changed, f.ctx.targets, f.ctx.floor};
    const auto a = run_grid(small_grid(), f.ctx, EvalOptions{});
    const auto b = run_grid(small_grid(), cctx, EvalOptions{});
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(describe(a.rows[i].hp), describe(b.rows[i].hp));
        EXPECT_EQ(a.rows[i].tune_metric, b.rows[i].tune_metric);
    }
}

TEST(Grid, FailedCellsAreReportedLast) {
    Fixture f;
    GridSpec g;
    g.windows = {4};
    g.neighbors = {5};
    g.radii = {std::nullopt};
    g.outliers = parse_outlier_list("none,tailp:0.2:0.2");
    g.models = parse_model_list("mean,m3");
    const auto board = run_grid(g, f.ctx, EvalOptions{});
    ASSERT_EQ(board.rows.size(), 4u);
    EXPECT_TRUE(board.rows[0].ok());
    EXPECT_TRUE(board.rows[1].ok());
    EXPECT_TRUE(board.rows[2].ok());
    EXPECT_FALSE(board.rows[3].ok());
    EXPECT_EQ(board.rows[3].status.rfind("failed", 0), 0u);
}

TEST(CrossValidation, SingleFoldEqualsGrid) {
    Fixture f;
    const auto grid = run_grid(small_grid(), f.ctx, EvalOptions{});
    const auto cv = run_cv(small_grid(), f.ctx, 1, EvalOptions{});
    EXPECT_EQ(csv(grid), csv(cv));
}

TEST(CrossValidation, FoldsAreContiguousDayBlocks) {
    Fixture f;
    const auto folds = day_block_folds(f.ctx, 3);
    ASSERT_EQ(folds.size(), 3u);
    std::vector<std::size_t> all;
    for (const auto& fold : folds) {
        ASSERT_FALSE(fold.empty());
        ASSERT_TRUE(std::is_sorted(fold.begin(), fold.end()));
        all.insert(all.end(), fold.begin(), fold.end());
    }
    EXPECT_EQ(all, side_targets(f.ctx, Side::Tune));
    EXPECT_LT(folds[0].back(), folds[1].front());
}

TEST(CrossValidation, FoldOrderDoesNotMatter) {
    Fixture f;
    const auto a = run_cv(small_grid(), f.ctx, 3, EvalOptions{});
    const auto b = run_cv(small_grid(), f.ctx, 3, EvalOptions{}, {2, 0, 1});
    EXPECT_EQ(csv(a), csv(b));
}

TEST(CrossValidation, DeterministicAcrossJobs) {
    Fixture f;
    EvalOptions many;
    many.jobs = 3;
    EXPECT_EQ(csv(run_cv(small_grid(), f.ctx, 2, EvalOptions{})), csv(run_cv(small_grid(), f.ctx, 2, many)));
}

TEST(HourlyTuningTest, OneBoardPerHour) {
    Fixture f;
    GridSpec g;
    g.windows = {3, 5};
    g.neighbors = {5, 15};
    const auto tuned = tune_hourly_bank(g, f.ctx, 1, EvalOptions{});
    ASSERT_EQ(tuned.boards.size(), 24u);
    for (int h = 0; h < 24; ++h) {
        EXPECT_EQ(describe(tuned.bank.hours[h]), describe(tuned.boards[h].selected().hp));
    }
}
