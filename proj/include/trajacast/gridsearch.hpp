#pragma once

#include "trajacast/parallel.hpp"
#include "trajacast/pipeline.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trajacast {

enum class Objective { Mae, Winkler };

Objective parse_objective(std::string_view name);
std::string to_string(Objective objective);

struct GridSpec {
    std::vector<std::size_t> windows;
    std::vector<std::size_t> neighbors;
    std::vector<std::optional<int>> radii{std::nullopt};
    std::vector<DistanceKind> distances{dist::WeightedEuclidean{}};
    std::vector<ModelSpec> models{ModelSpec{}};
    std::vector<OutlierPolicy> outliers{outlier::None{}};
    std::size_t step = 1;

    /// L = 2..20 and K = 5, 10, ..., 200 with weighted Euclidean and the mean.
    static GridSpec defaults();

    /// Cartesian product in a fixed order: model, distance, outlier, L, K, R.
    std::vector<HyperParams> cells() const;
};

/// Comma separated lists: "2,4,8", ranges "2-20" or "5-200/5".
std::vector<std::size_t> parse_count_list(std::string_view text);
/// Radii list; "none" stands for no seasonal filter.
std::vector<std::optional<int>> parse_radius_list(std::string_view text);
/// Model names; `m1:*` and `m2:*` expand to every weight function.
std::vector<ModelSpec> parse_model_list(std::string_view text);
std::vector<DistanceKind> parse_distance_list(std::string_view text);
std::vector<OutlierPolicy> parse_outlier_list(std::string_view text);

struct EvalOptions {
    Objective objective = Objective::Mae;
    double alpha = 0.05;
    std::size_t jobs = 1;
    std::optional<int> hour; ///< restrict tune and test targets to one hour of day
};

struct LeaderboardRow {
    HyperParams hp;
    double tune_metric = 0.0;
    double test_metric = 0.0;
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
};

/// Rows sorted by tune metric (failed cells last); test metrics are reported
/// but never used for ordering.
struct Leaderboard {
    std::vector<LeaderboardRow> rows;

    /// The best successful row; throws when every cell failed.
    const LeaderboardRow& selected() const;
};

/// Objective value of `plan` over the given targets (MAE of the point
/// forecasts or mean Winkler score of ST intervals).
double evaluate_targets(const SimilarityPlan& plan, const SeriesContext& ctx, const std::vector<std::size_t>& targets,
                        const EvalOptions& options, std::size_t jobs);

/// Targets of one side, filtered to `hour` when set.
std::vector<std::size_t> side_targets(const SeriesContext& ctx, Side side, std::optional<int> hour = std::nullopt);

Leaderboard run_grid(const GridSpec& spec, const SeriesContext& ctx, const EvalOptions& options);

/// Contiguous day-block folds over the tune targets; fold k holds the targets
/// whose tune day d satisfies ⌊d·folds/days⌋ = k.
std::vector<std::vector<std::size_t>> day_block_folds(const SeriesContext& ctx, std::size_t folds,
                                                      std::optional<int> hour = std::nullopt);

/// Cross-validated grid: each cell's tune metric is the mean fold metric, with
/// Model-3 weights trained outside the evaluated fold. `fold_order` permutes
/// the fold evaluation order (identity when empty).
Leaderboard run_cv(const GridSpec& spec, const SeriesContext& ctx, std::size_t folds, const EvalOptions& options,
                   const std::vector<std::size_t>& fold_order = {});

struct HourlyTuning {
    HourlyModelBank bank;
    std::vector<Leaderboard> boards; ///< one per hour
};

/// Cross-validates the grid separately for every hour of day.
HourlyTuning tune_hourly_bank(const GridSpec& spec, const SeriesContext& ctx, std::size_t folds,
                              const EvalOptions& options);

/// `rank, model, distance, L, K, R, outlier, weight_fn, tune_metric, test_metric, status`.
void write_leaderboard_csv(std::ostream& out, const Leaderboard& board);

} // namespace trajacast
