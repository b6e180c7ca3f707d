#pragma once

#include "trajacast/benchmarks.hpp"
#include "trajacast/dataset.hpp"
#include "trajacast/distances.hpp"
#include "trajacast/intervals.hpp"
#include "trajacast/neighbors.hpp"
#include "trajacast/outliers.hpp"
#include "trajacast/pointcast.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace trajacast {

enum class PointRule { Mean, RankWeighted, DistanceWeighted, Global, LocalRegression };

struct ModelSpec {
    PointRule rule = PointRule::Mean;
    RankFunction rank = RankFunction::F1;
    DistanceFunction weight = DistanceFunction::G1;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// `mean`, `m1:f1..f5`, `m2:g1..g4`, `m3` or `localreg`.
ModelSpec parse_model_spec(std::string_view name);
std::string to_string(const ModelSpec& spec);
/// Weight function column of leaderboards: f1..f5, g1..g4 or "-".
std::string weight_name(const ModelSpec& spec);

struct HyperParams {
    DistanceKind distance = dist::WeightedEuclidean{};
    std::size_t window = 14;
    std::size_t neighbors = 25;
    std::optional<int> radius; ///< seasonal filter radius in slots
    OutlierPolicy outlier = outlier::None{};
    ModelSpec model;
    std::size_t step = 1;
};

void validate(const HyperParams& hp);

/// Model name with an optional `+seasonal:<R>` suffix, e.g. `m1:f2+seasonal:3`.
void apply_model_name(HyperParams& hp, std::string_view name);
std::string model_name(const HyperParams& hp);

/// Space separated `key=value` description, also accepted by parse_hyperparams.
std::string describe(const HyperParams& hp);
/// Applies `model= distance= L= K= R= outlier= step=` assignments on top of `base`.
HyperParams parse_hyperparams(std::string_view text, HyperParams base = {});

/// One set of hyperparameters per hour of the target's time of day.
struct HourlyModelBank {
    std::array<HyperParams, 24> hours;

    static HourlyModelBank uniform(const HyperParams& hp);
};

void write_bank_csv(const std::string& path, const HourlyModelBank& bank);
HourlyModelBank read_bank_csv(const std::string& path);

/// Read-only view of a series and its tune/test target split.
struct SeriesContext {
    const TimeSeries* series = nullptr;
    TargetSplit targets;
    ReferenceFloor floor = ReferenceFloor::EqualHistory;

    std::span<const double> values() const { return series->values(); }
    int start_slot() const { return series->start_slot(); }
    Side side_of(std::size_t target) const {
        return target >= targets.test_first_target ? Side::Test : Side::Tune;
    }
    int hour_of(std::size_t target) const { return series->slot_at(target) / 4; }
    std::size_t first_target(Side side) const {
        return side == Side::Tune ? targets.tune_first_target : targets.test_first_target;
    }
    std::size_t last_target(Side side) const {
        return side == Side::Tune ? targets.test_first_target - 1 : targets.last_target;
    }
};

/// A similarity model ready to forecast: its query split plus, for Model-3,
/// the weights fitted on the tune queries.
struct SimilarityPlan {
    HyperParams hp;
    SplitConfig split;
    std::optional<GlobalWeights> weights;
};

/// Builds the split for `hp`. Model-3 weights are fitted on the tune targets
/// accepted by `train_filter` (all tune targets when empty).
SimilarityPlan plan_similarity(const SeriesContext& ctx, const HyperParams& hp,
                               const std::vector<std::size_t>& train_targets = {});

/// Reference set of the query whose target is `target`. Targets before the
/// tune range (history used for error series) reference [1, q-h].
ReferenceSet reference_for_target(const SimilarityPlan& plan, const SeriesContext& ctx, std::size_t target);

/// Candidates after seasonal filtering, K-NN and the outlier policy.
CandidateSet find_candidates(const SimilarityPlan& plan, const SeriesContext& ctx, std::size_t target);

double point_from_candidates(const SimilarityPlan& plan, const SeriesContext& ctx, std::size_t target,
                             const CandidateSet& candidates);

double forecast_similarity(const SimilarityPlan& plan, const SeriesContext& ctx, std::size_t target);

/// Per-hour plans; Model-3 entries are fitted on tune targets of their hour.
struct HourlyPlan {
    std::array<SimilarityPlan, 24> hours;
};

HourlyPlan plan_hourly(const SeriesContext& ctx, const HourlyModelBank& bank);

/// Dispatches to the plan of the target's hour of day.
const SimilarityPlan& plan_for(const HourlyPlan& plan, const SeriesContext& ctx, std::size_t target);
double forecast_hourly(const HourlyPlan& plan, const SeriesContext& ctx, std::size_t target);

namespace model {

struct Similarity {
    HyperParams hp;
};
struct Hourly {
    HourlyModelBank bank;
};
struct Naive {};
struct SeasonalNaive {
    std::size_t period = kSlotsPerDay;
    std::size_t depth = 1;
};
struct Ar {
    std::size_t order = 9;
    bool intercept = true;
};

} // namespace model

using PointModel = std::variant<model::Similarity, model::Hourly, model::Naive, model::SeasonalNaive, model::Ar>;

/// `naive`, `snaive:<period>:<depth>`, `ar:<p>` or a similarity model name.
PointModel parse_point_model(std::string_view name, const HyperParams& base);

/// A point model with its fitted state. AR models are fitted once on the
/// observations before the first tune target.
struct PreparedModel {
    std::variant<SimilarityPlan, HourlyPlan, model::Naive, model::SeasonalNaive, ArModel> state;
    std::size_t step = 1;
};

PreparedModel prepare(const SeriesContext& ctx, const PointModel& model, std::size_t step);

double forecast_point(const PreparedModel& model, const SeriesContext& ctx, std::size_t target);

/// First target the model can forecast without running out of history.
std::size_t earliest_target(const PreparedModel& model);

enum class IntervalMethod { Hs, HsSeasonal, St, StSeasonal, StHourly, Mdst, MdstSeasonal };

/// `hs`, `hs-s`, `st`, `st-s`, `st-hourly`, `mdst`, `mdst-s`.
IntervalMethod parse_interval_method(std::string_view name);
std::string to_string(IntervalMethod method);
bool needs_base_model(IntervalMethod method);

struct IntervalSpec {
    IntervalMethod method = IntervalMethod::St;
    HyperParams st;         ///< ST/ST-S neighbours and point rule
    HourlyModelBank bank;   ///< ST-hourly
    std::size_t hs_window = 60;
    MdstConfig mdst;
    std::size_t history = 30 * kSlotsPerDay; ///< error-series length kept before the tune range
    std::string base;       ///< label of the point model behind HS/MDST

    /// Defaults per method: ST L=9 K=60, ST-S L=4 K=150 R=5, HS L=60,
    /// MDST L=8 K=220, MDST-S additionally R=6.
    static IntervalSpec defaults(IntervalMethod method, std::size_t step);
};

/// Point forecast and interval at one target.
struct IntervalForecast {
    double forecast = 0.0;
    PredictionInterval interval;
};

/// Interval models built from candidates only (ST variants).
struct PreparedCandidateInterval {
    std::variant<SimilarityPlan, HourlyPlan> plan;
};

PreparedCandidateInterval prepare_candidate_interval(const SeriesContext& ctx, const IntervalSpec& spec);

IntervalForecast forecast_candidate_interval(const PreparedCandidateInterval& model, const SeriesContext& ctx,
                                             std::size_t target, double alpha);

/// HS/MDST interval around `forecast` using errors of the base model.
PredictionInterval error_based_interval(const IntervalSpec& spec, const SeriesContext& ctx, const ErrorSeries& errors,
                                        double forecast, std::size_t target, std::size_t step, double alpha);

/// Number of targets of error history the method needs before a query.
std::size_t error_history_needed(const IntervalSpec& spec);

} // namespace trajacast
