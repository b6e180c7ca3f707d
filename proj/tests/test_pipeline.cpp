#include "trajacast/pipeline.hpp"

#include "trajacast/synthdata.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace trajacast;

namespace {

// Two weeks of rush-hour shaped data: tune targets from day 5, test from day 10.
struct Fixture {
    TimeSeries series = generate(SynthSpec{synth::TwoRegime{}, kSlotsPerDay * 14, 17});
    SeriesContext ctx{&series, make_target_split(series.size(), 401, 873), ReferenceFloor::EqualHistory};
};

HyperParams small_hp(std::string_view model = "mean") {
    HyperParams hp;
    hp.window = 4;
    hp.neighbors = 10;
    apply_model_name(hp, model);
    return hp;
}

} // namespace

TEST(ModelSpecNames, RoundTrip) {
    for (std::string name : {"mean", "m1:f1", "m1:f5", "m2:g1", "m2:g4", "m3", "localreg"}) {
        EXPECT_EQ(to_string(parse_model_spec(name)), name);
    }
    EXPECT_EQ(weight_name(parse_model_spec("m1:f3")), "f3");
    EXPECT_EQ(weight_name(parse_model_spec("m2:g2")), "g2");
    EXPECT_EQ(weight_name(parse_model_spec("mean")), "-");
    EXPECT_THROW(parse_model_spec("m1:f6"), std::invalid_argument);
    EXPECT_THROW(parse_model_spec("median"), std::invalid_argument);
}

TEST(HyperParamsText, DescribeRoundTrips) {
    HyperParams hp;
    hp.window = 7;
    hp.neighbors = 33;
    hp.radius = 3;
    hp.outlier = parse_outlier_policy("tailp:0.1:0.2");
    hp.distance = parse_distance("manhattan");
    hp.model = parse_model_spec("m2:g3");
    hp.step = 4;
    const auto text = describe(hp);
    EXPECT_EQ(describe(parse_hyperparams(text)), text);
    EXPECT_EQ(model_name(hp), "m2:g3+seasonal:3");
    HyperParams other;
    apply_model_name(other, "m1:f2+seasonal:5");
    EXPECT_EQ(other.radius, 5);
    EXPECT_EQ(other.model, parse_model_spec("m1:f2"));
    EXPECT_THROW(parse_hyperparams("L=abc"), std::invalid_argument);
    EXPECT_THROW(parse_hyperparams("colour=red"), std::invalid_argument);
}

TEST(HyperParamsText, Validation) {
    HyperParams hp;
    hp.neighbors = 0;
    EXPECT_THROW(validate(hp), std::invalid_argument);
    hp = HyperParams{};
    hp.window = 1;
    EXPECT_THROW(validate(hp), std::invalid_argument);
    hp = HyperParams{};
    hp.radius = -1;
    EXPECT_THROW(validate(hp), std::invalid_argument);
}

TEST(Bank, CsvRoundTrip) {
    auto bank = HourlyModelBank::uniform(small_hp());
    bank.hours[7] = small_hp("m1:f4+seasonal:2");
    const auto dir = testutil::temp_dir("bank");
    const auto path = (dir / "bank.csv").string();
    write_bank_csv(path, bank);
    const auto back = read_bank_csv(path);
    for (int h = 0; h < 24; ++h) {
        EXPECT_EQ(describe(back.hours[h]), describe(bank.hours[h]));
    }
    testutil::write_file(dir / "short.csv", "hour,hyperparams\n0,model=mean\n");
    EXPECT_THROW(read_bank_csv((dir / "short.csv").string()), std::invalid_argument);
}

TEST(Similarity, ForecastMatchesManualSearch) {
    Fixture f;
    const auto hp = small_hp();
    const auto plan = plan_similarity(f.ctx, hp);
    for (std::size_t t : {401u, 600u, 873u, 1344u}) {
        const auto q = t - hp.window - hp.step + 1;
        const auto ref = reference_for(q, plan.split, f.ctx.side_of(t));
        const auto c = k_nearest(f.ctx.values(), plan.split.view(q), ref, hp.distance, hp.neighbors);
        EXPECT_DOUBLE_EQ(forecast_similarity(plan, f.ctx, t), forecast_mean(c)) << t;
    }
}

TEST(Similarity, NoLookAhead) {
    Fixture f;
    for (std::string model : {"mean", "m1:f2+seasonal:2", "m2:g1", "localreg", "m3"}) {
        for (std::size_t step : {1u, 3u}) {
            auto hp = small_hp(model);
            hp.step = step;
            const auto plan = plan_similarity(f.ctx, hp);
            for (std::size_t t : {900u, 1100u, 1344u}) {
                const double clean = forecast_similarity(plan, f.ctx, t);
                std::vector<double> v(f.series.values().begin(), f.series.values().end());
                for (std::size_t i = t - step; i < v.size(); ++i) {
                    v[i] = 1e6;
                }
                const TimeSeries poisoned(f.series.start(), v);
                const SeriesContext pctx{&poisoned, f.ctx.targets, f.ctx.floor};
                const auto pplan = plan_similarity(pctx, hp);
                ASSERT_DOUBLE_EQ(forecast_similarity(pplan, pctx, t), clean) << model << " h=" << step << " t=" << t;
            }
        }
    }
}

TEST(Hourly, UniformBankEqualsSingleModel) {
    Fixture f;
    const auto hp = small_hp("m1:f2");
    const auto plan = plan_similarity(f.ctx, hp);
    const auto hourly = plan_hourly(f.ctx, HourlyModelBank::uniform(hp));
    for (std::size_t t = 873; t <= 1344; t += 7) {
        ASSERT_DOUBLE_EQ(forecast_hourly(hourly, f.ctx, t), forecast_similarity(plan, f.ctx, t));
    }
}

TEST(Hourly, DispatchesOnTargetHour) {
    Fixture f;
    auto bank = HourlyModelBank::uniform(small_hp());
    bank.hours[3] = small_hp("m1:f3");
    bank.hours[3].neighbors = 17;
    const auto hourly = plan_hourly(f.ctx, bank);
    // 03:10 falls in a 15-minute slot of hour 3.
    const std::size_t t = 96 * 11 + 12 + 1;
    ASSERT_EQ(f.ctx.hour_of(t), 3);
    EXPECT_EQ(plan_for(hourly, f.ctx, t).hp.neighbors, 17u);
    EXPECT_EQ(plan_for(hourly, f.ctx, t + 4).hp.neighbors, 10u);
}

TEST(Hourly, SeasonalRadiusChangesOutputs) {
    Fixture f;
    auto wide = HourlyModelBank::uniform(small_hp());
    auto seasonal = wide;
    for (auto& hp : seasonal.hours) {
        hp.radius = 3;
    }
    const auto a = plan_hourly(f.ctx, wide);
    const auto b = plan_hourly(f.ctx, seasonal);
    int differ = 0;
    for (std::size_t t = 873; t <= 1344; ++t) {
        differ += forecast_hourly(a, f.ctx, t) != forecast_hourly(b, f.ctx, t);
    }
    EXPECT_GT(differ, 100);
}

TEST(PointModels, Benchmarks) {
    Fixture f;
    const auto naive = prepare(f.ctx, parse_point_model("naive", {}), 2);
    EXPECT_DOUBLE_EQ(forecast_point(naive, f.ctx, 900), f.series.values()[897]);
    const auto snaive = prepare(f.ctx, parse_point_model("snaive:96:1", {}), 1);
    EXPECT_DOUBLE_EQ(forecast_point(snaive, f.ctx, 900), f.series.values()[900 - 96 - 1]);
    const auto ar = prepare(f.ctx, parse_point_model("ar:2", {}), 1);
    const auto& model = std::get<ArModel>(ar.state);
    const auto v = f.series.values();
    EXPECT_NEAR(forecast_point(ar, f.ctx, 900), ar_forecast(model, v.subspan(897, 2)), 1e-12);
    EXPECT_GE(earliest_target(ar), 3u);
    EXPECT_THROW(parse_point_model("snaive:0:1", {}), std::invalid_argument);
}

TEST(IntervalSpecs, NamesAndDefaults) {
    for (std::string name : {"hs", "hs-s", "st", "st-s", "st-hourly", "mdst", "mdst-s"}) {
        EXPECT_EQ(to_string(parse_interval_method(name)), name);
    }
    EXPECT_THROW(parse_interval_method("bootstrap"), std::invalid_argument);
    const auto st = IntervalSpec::defaults(IntervalMethod::St, 1);
    EXPECT_EQ(st.st.window, 9u);
    EXPECT_EQ(st.st.neighbors, 60u);
    const auto sts = IntervalSpec::defaults(IntervalMethod::StSeasonal, 1);
    EXPECT_EQ(sts.st.window, 4u);
    EXPECT_EQ(sts.st.neighbors, 150u);
    EXPECT_EQ(sts.st.radius, 5);
    EXPECT_EQ(IntervalSpec::defaults(IntervalMethod::MdstSeasonal, 1).mdst.radius, 6);
    EXPECT_TRUE(needs_base_model(IntervalMethod::Hs));
    EXPECT_FALSE(needs_base_model(IntervalMethod::St));
}

TEST(IntervalSpecs, StIntervalWrapsCandidates) {
    Fixture f;
    auto spec = IntervalSpec::defaults(IntervalMethod::St, 1);
    const auto prepared = prepare_candidate_interval(f.ctx, spec);
    const auto plan = plan_similarity(f.ctx, spec.st);
    for (std::size_t t : {900u, 1200u}) {
        const auto r = forecast_candidate_interval(prepared, f.ctx, t, 0.1);
        const auto expected = st_interval(find_candidates(plan, f.ctx, t), 0.1);
        EXPECT_DOUBLE_EQ(r.interval.lower, expected.lower);
        EXPECT_DOUBLE_EQ(r.interval.upper, expected.upper);
        EXPECT_DOUBLE_EQ(r.forecast, forecast_similarity(plan, f.ctx, t));
    }
}
