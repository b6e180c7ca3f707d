#include "trajacast/gridsearch.hpp"

#include "trajacast/metrics.hpp"
#include "trajacast/parallel.hpp"

#include "format.hpp"
#include "parse_util.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace trajacast {
namespace {

auto sort_key(const HyperParams& hp) {
    return std::make_tuple(to_string(hp.model), to_string(hp.distance), hp.window, hp.neighbors,
                           hp.radius ? *hp.radius : -1, to_string(hp.outlier));
}

bool row_before(const LeaderboardRow& a, const LeaderboardRow& b) {
    if (a.ok() != b.ok()) {
        return a.ok();
    }
    if (a.ok() && a.tune_metric != b.tune_metric) {
        return a.tune_metric < b.tune_metric;
    }
    return sort_key(a.hp) < sort_key(b.hp);
}

std::string clean_status(const std::string& message) {
    std::string s = "failed: " + message;
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

Leaderboard finish(std::vector<LeaderboardRow> rows) {
    std::stable_sort(rows.begin(), rows.end(), row_before);
    return Leaderboard{std::move(rows)};
}

/// Splits the worker budget between cells and the queries inside a cell.
std::pair<std::size_t, std::size_t> split_jobs(std::size_t cells, std::size_t jobs) {
    jobs = std::max<std::size_t>(jobs, 1);
    if (cells >= jobs) {
        return {jobs, 1};
    }
    return {1, jobs};
}

std::vector<std::size_t> hour_filter(const SeriesContext& ctx, std::vector<std::size_t> targets,
                                     std::optional<int> hour) {
    if (hour) {
        std::erase_if(targets, [&](std::size_t t) { return ctx.hour_of(t) != *hour; });
    }
    return targets;
}

} // namespace

Objective parse_objective(std::string_view name) {
    if (name == "mae") {
        return Objective::Mae;
    }
    if (name == "winkler") {
        return Objective::Winkler;
    }
    throw std::invalid_argument("unknown objective '" + std::string(name) + "' (mae|winkler)");
}

std::string to_string(Objective objective) {
    return objective == Objective::Mae ? "mae" : "winkler";
}

GridSpec GridSpec::defaults() {
    GridSpec spec;
    for (std::size_t L = 2; L <= 20; ++L) {
        spec.windows.push_back(L);
    }
    for (std::size_t K = 5; K <= 200; K += 5) {
        spec.neighbors.push_back(K);
    }
    return spec;
}

std::vector<HyperParams> GridSpec::cells() const {
    if (windows.empty() || neighbors.empty() || radii.empty() || distances.empty() || models.empty() ||
        outliers.empty()) {
        throw std::invalid_argument("every grid dimension needs at least one value");
    }
    std::vector<HyperParams> out;
    for (const auto& model : models) {
        for (const auto& distance : distances) {
            for (const auto& policy : outliers) {
                for (const auto L : windows) {
                    for (const auto K : neighbors) {
                        for (const auto& R : radii) {
                            HyperParams hp;
                            hp.model = model;
                            hp.distance = distance;
                            hp.outlier = policy;
                            hp.window = L;
                            hp.neighbors = K;
                            hp.radius = R;
                            hp.step = step;
                            out.push_back(hp);
                        }
                    }
                }
            }
        }
    }
    return out;
}

std::vector<std::size_t> parse_count_list(std::string_view text) {
    std::vector<std::size_t> out;
    for (const auto& raw : detail::split(text, ',')) {
        const auto item = detail::trim(raw);
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            out.push_back(detail::parse_count(item, text));
            continue;
        }
        const auto slash = item.find('/', dash);
        const auto lo = detail::parse_count(item.substr(0, dash), text);
        const auto hi = detail::parse_count(
            item.substr(dash + 1, slash == std::string::npos ? std::string::npos : slash - dash - 1), text);
        const auto by = slash == std::string::npos ? 1 : detail::parse_count(item.substr(slash + 1), text);
        if (by == 0 || hi < lo) {
            throw std::invalid_argument("bad range '" + item + "'");
        }
        for (auto v = lo; v <= hi; v += by) {
            out.push_back(v);
        }
    }
    return out;
}

std::vector<std::optional<int>> parse_radius_list(std::string_view text) {
    std::vector<std::optional<int>> out;
    for (const auto& raw : detail::split(text, ',')) {
        const auto item = detail::trim(raw);
        if (item == "none" || item == "-") {
            out.emplace_back(std::nullopt);
        } else {
            for (const auto r : parse_count_list(item)) {
                out.emplace_back(static_cast<int>(r));
            }
        }
    }
    return out;
}

std::vector<ModelSpec> parse_model_list(std::string_view text) {
    std::vector<ModelSpec> out;
    for (const auto& raw : detail::split(text, ',')) {
        const auto item = detail::trim(raw);
        if (item == "m1:*") {
            for (int f = 1; f <= 5; ++f) {
                out.push_back({PointRule::RankWeighted, static_cast<RankFunction>(f), DistanceFunction::G1});
            }
        } else if (item == "m2:*") {
            for (int g = 1; g <= 4; ++g) {
                out.push_back({PointRule::DistanceWeighted, RankFunction::F1, static_cast<DistanceFunction>(g)});
            }
        } else {
            out.push_back(parse_model_spec(item));
        }
    }
    return out;
}

std::vector<DistanceKind> parse_distance_list(std::string_view text) {
    std::vector<DistanceKind> out;
    for (const auto& raw : detail::split(text, ',')) {
        out.push_back(parse_distance(detail::trim(raw)));
    }
    return out;
}

std::vector<OutlierPolicy> parse_outlier_list(std::string_view text) {
    std::vector<OutlierPolicy> out;
    for (const auto& raw : detail::split(text, ',')) {
        out.push_back(parse_outlier_policy(detail::trim(raw)));
    }
    return out;
}

const LeaderboardRow& Leaderboard::selected() const {
    if (rows.empty() || !rows.front().ok()) {
        throw std::runtime_error(rows.empty() ? "empty leaderboard"
                                              : "every grid cell failed; first error: " + rows.front().status);
    }
    return rows.front();
}

std::vector<std::size_t> side_targets(const SeriesContext& ctx, Side side, std::optional<int> hour) {
    std::vector<std::size_t> targets;
    for (std::size_t t = ctx.first_target(side); t <= ctx.last_target(side); ++t) {
        targets.push_back(t);
    }
    return hour_filter(ctx, std::move(targets), hour);
}

double evaluate_targets(const SimilarityPlan& plan, const SeriesContext& ctx, const std::vector<std::size_t>& targets,
                        const EvalOptions& options, std::size_t jobs) {
    if (targets.empty()) {
        throw std::invalid_argument("no targets to evaluate");
    }
    std::vector<double> loss(targets.size());
    parallel_for(targets.size(), jobs, [&](std::size_t i) {
        const auto t = targets[i];
        const auto candidates = find_candidates(plan, ctx, t);
        const double actual = ctx.values()[t - 1];
        if (options.objective == Objective::Mae) {
            loss[i] = std::abs(point_from_candidates(plan, ctx, t, candidates) - actual);
        } else {
            loss[i] = winkler_score(st_interval(candidates, options.alpha), actual, options.alpha);
        }
    });
    double total = 0.0;
    for (const auto v : loss) {
        total += v;
    }
    return total / static_cast<double>(loss.size());
}

Leaderboard run_grid(const GridSpec& spec, const SeriesContext& ctx, const EvalOptions& options) {
    const auto cells = spec.cells();
    const auto tune = side_targets(ctx, Side::Tune, options.hour);
    const auto test = side_targets(ctx, Side::Test, options.hour);
    const auto [outer, inner] = split_jobs(cells.size(), options.jobs);
    std::vector<LeaderboardRow> rows(cells.size());
    parallel_for(cells.size(), outer, [&](std::size_t c) {
        auto& row = rows[c];
        row.hp = cells[c];
        try {
            const auto plan = plan_similarity(ctx, row.hp, row.hp.model.rule == PointRule::Global ? tune
                                                                                                 : std::vector<std::size_t>{});
            row.tune_metric = evaluate_targets(plan, ctx, tune, options, inner);
            row.test_metric = evaluate_targets(plan, ctx, test, options, inner);
        } catch (const std::exception& e) {
            row.status = clean_status(e.what());
        }
    });
    return finish(std::move(rows));
}

std::vector<std::vector<std::size_t>> day_block_folds(const SeriesContext& ctx, std::size_t folds,
                                                      std::optional<int> hour) {
    if (folds < 1) {
        throw std::invalid_argument("need at least one fold");
    }
    const auto first = ctx.first_target(Side::Tune);
    const auto count = ctx.last_target(Side::Tune) - first + 1;
    const std::size_t days = (count + kSlotsPerDay - 1) / kSlotsPerDay;
    if (days < folds) {
        throw std::invalid_argument("tune split spans " + std::to_string(days) + " day(s); cannot form " +
                                    std::to_string(folds) + " day-block folds");
    }
    std::vector<std::vector<std::size_t>> out(folds);
    for (std::size_t t = first; t < first + count; ++t) {
        const auto day = (t - first) / kSlotsPerDay;
        out[day * folds / days].push_back(t);
    }
    for (auto& fold : out) {
        fold = hour_filter(ctx, std::move(fold), hour);
    }
    return out;
}

Leaderboard run_cv(const GridSpec& spec, const SeriesContext& ctx, std::size_t folds, const EvalOptions& options,
                   const std::vector<std::size_t>& fold_order) {
    const auto cells = spec.cells();
    const auto blocks = day_block_folds(ctx, folds, options.hour);
    std::vector<std::size_t> order = fold_order;
    if (order.empty()) {
        for (std::size_t k = 0; k < folds; ++k) {
            order.push_back(k);
        }
    }
    {
        auto check = order;
        std::sort(check.begin(), check.end());
        for (std::size_t k = 0; k < check.size(); ++k) {
            if (check.size() != folds || check[k] != k) {
                throw std::invalid_argument("fold order must be a permutation of 0.." + std::to_string(folds - 1));
            }
        }
    }
    const auto tune = side_targets(ctx, Side::Tune, options.hour);
    const auto test = side_targets(ctx, Side::Test, options.hour);
    const auto [outer, inner] = split_jobs(cells.size(), options.jobs);
    std::vector<LeaderboardRow> rows(cells.size());
    parallel_for(cells.size(), outer, [&](std::size_t c) {
        auto& row = rows[c];
        row.hp = cells[c];
        try {
            const bool global = row.hp.model.rule == PointRule::Global;
            const auto full = plan_similarity(ctx, row.hp, global ? tune : std::vector<std::size_t>{});
            // Fold metrics are summed in fold index order whatever the evaluation order.
            std::vector<double> metric(folds, 0.0);
            for (const auto k : order) {
                if (blocks[k].empty()) {
                    throw std::invalid_argument("fold " + std::to_string(k) + " has no targets");
                }
                if (global && folds > 1) {
                    std::vector<std::size_t> train;
                    for (std::size_t j = 0; j < folds; ++j) {
                        if (j != k) {
                            train.insert(train.end(), blocks[j].begin(), blocks[j].end());
                        }
                    }
                    std::sort(train.begin(), train.end());
                    const auto plan = plan_similarity(ctx, row.hp, train);
                    metric[k] = evaluate_targets(plan, ctx, blocks[k], options, inner);
                } else {
                    metric[k] = evaluate_targets(full, ctx, blocks[k], options, inner);
                }
            }
            double total = 0.0;
            for (const auto m : metric) {
                total += m;
            }
            row.tune_metric = total / static_cast<double>(folds);
            row.test_metric = evaluate_targets(full, ctx, test, options, inner);
        } catch (const std::exception& e) {
            row.status = clean_status(e.what());
        }
    });
    return finish(std::move(rows));
}

HourlyTuning tune_hourly_bank(const GridSpec& spec, const SeriesContext& ctx, std::size_t folds,
                              const EvalOptions& options) {
    HourlyTuning out;
    for (int h = 0; h < 24; ++h) {
        auto hour_options = options;
        hour_options.hour = h;
        out.boards.push_back(run_cv(spec, ctx, folds, hour_options));
        out.bank.hours[static_cast<std::size_t>(h)] = out.boards.back().selected().hp;
    }
    return out;
}

void write_leaderboard_csv(std::ostream& out, const Leaderboard& board) {
    out << "rank,model,distance,L,K,R,outlier,weight_fn,tune_metric,test_metric,status\n";
    std::size_t rank = 0;
    for (const auto& row : board.rows) {
        ++rank;
        const auto& hp = row.hp;
        auto model = to_string(hp.model);
        model = model.substr(0, model.find(':'));
        out << rank << ',' << model << ',' << to_string(hp.distance) << ',' << hp.window << ',' << hp.neighbors << ','
            << (hp.radius ? std::to_string(*hp.radius) : "-") << ',' << to_string(hp.outlier) << ','
            << weight_name(hp.model) << ',';
        if (row.ok()) {
            out << detail::format_double(row.tune_metric) << ',' << detail::format_double(row.test_metric);
        } else {
            out << ',';
        }
        out << ',' << row.status << '\n';
    }
}

std::size_t default_jobs() {
    if (const char* env = std::getenv("TRAJACAST_JOBS"); env && *env) {
        try {
            const auto n = detail::parse_count(env, "TRAJACAST_JOBS");
            if (n > 0) {
                return n;
            }
        } catch (const std::invalid_argument&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace trajacast
