#include "trajacast/pipeline.hpp"

#include "format.hpp"
#include "overloaded.hpp"
#include "parse_util.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace trajacast {
namespace {

using detail::overloaded;

std::size_t parse_suffix_index(std::string_view token, char letter, std::size_t max, std::string_view context) {
    if (token.size() != 2 || token[0] != letter || token[1] < '1' || token[1] > static_cast<char>('0' + max)) {
        throw std::invalid_argument("bad weight function '" + std::string(token) + "' in '" + std::string(context) +
                                    "'");
    }
    return static_cast<std::size_t>(token[1] - '0');
}

} // namespace

ModelSpec parse_model_spec(std::string_view name) {
    const auto parts = detail::split(name, ':');
    ModelSpec spec;
    const auto& head = parts.front();
    if (head == "mean" && parts.size() == 1) {
        spec.rule = PointRule::Mean;
    } else if (head == "m1" && parts.size() <= 2) {
        spec.rule = PointRule::RankWeighted;
        spec.rank = parts.size() == 2 ? static_cast<RankFunction>(parse_suffix_index(parts[1], 'f', 5, name))
                                      : RankFunction::F1;
    } else if (head == "m2" && parts.size() <= 2) {
        spec.rule = PointRule::DistanceWeighted;
        spec.weight = parts.size() == 2 ? static_cast<DistanceFunction>(parse_suffix_index(parts[1], 'g', 4, name))
                                        : DistanceFunction::G1;
    } else if (head == "m3" && parts.size() == 1) {
        spec.rule = PointRule::Global;
    } else if (head == "localreg" && parts.size() == 1) {
        spec.rule = PointRule::LocalRegression;
    } else {
        throw std::invalid_argument("unknown model '" + std::string(name) + "'");
    }
    return spec;
}

std::string weight_name(const ModelSpec& spec) {
    switch (spec.rule) {
    case PointRule::RankWeighted:
        return "f" + std::to_string(static_cast<int>(spec.rank));
    case PointRule::DistanceWeighted:
        return "g" + std::to_string(static_cast<int>(spec.weight));
    default:
        return "-";
    }
}

std::string to_string(const ModelSpec& spec) {
    switch (spec.rule) {
    case PointRule::Mean:
        return "mean";
    case PointRule::RankWeighted:
        return "m1:" + weight_name(spec);
    case PointRule::DistanceWeighted:
        return "m2:" + weight_name(spec);
    case PointRule::Global:
        return "m3";
    case PointRule::LocalRegression:
        return "localreg";
    }
    return "?";
}

void validate(const HyperParams& hp) {
    if (hp.window < 2) {
        throw std::invalid_argument("L must be >= 2");
    }
    if (hp.neighbors < 1) {
        throw std::invalid_argument("K must be >= 1");
    }
    if (hp.step < 1) {
        throw std::invalid_argument("step must be >= 1");
    }
    if (hp.radius && (*hp.radius < 0 || *hp.radius > kSlotsPerDay / 2)) {
        throw std::invalid_argument("seasonal radius must lie in [0, 48]");
    }
    validate(hp.distance);
    validate(hp.outlier);
    if (hp.model.rule == PointRule::Global && !preserves_size(hp.outlier)) {
        throw std::invalid_argument("m3 needs exactly K candidates; outlier policy '" + to_string(hp.outlier) +
                                    "' removes candidates");
    }
    if (const auto* ht = std::get_if<dist::HeadTail>(&hp.distance); ht && ht->head + ht->tail > hp.window - 1) {
        throw std::invalid_argument("head-tail distance needs l1 + l2 <= L - 1");
    }
}

void apply_model_name(HyperParams& hp, std::string_view name) {
    const auto plus = name.find('+');
    hp.model = parse_model_spec(name.substr(0, plus));
    hp.radius.reset();
    if (plus != std::string_view::npos) {
        const auto suffix = name.substr(plus + 1);
        const auto parts = detail::split(suffix, ':');
        if (parts.size() != 2 || parts[0] != "seasonal") {
            throw std::invalid_argument("bad model suffix '" + std::string(suffix) + "', expected seasonal:<R>");
        }
        hp.radius = static_cast<int>(detail::parse_count(parts[1], name));
    }
}

std::string model_name(const HyperParams& hp) {
    auto s = to_string(hp.model);
    if (hp.radius) {
        s += "+seasonal:" + std::to_string(*hp.radius);
    }
    return s;
}

std::string describe(const HyperParams& hp) {
    std::string s = "model=" + to_string(hp.model) + " distance=" + to_string(hp.distance) +
                    " L=" + std::to_string(hp.window) + " K=" + std::to_string(hp.neighbors);
    if (hp.radius) {
        s += " R=" + std::to_string(*hp.radius);
    }
    s += " outlier=" + to_string(hp.outlier);
    if (hp.step != 1) {
        s += " step=" + std::to_string(hp.step);
    }
    return s;
}

HyperParams parse_hyperparams(std::string_view text, HyperParams base) {
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("expected key=value, got '" + token + "'");
        }
        const auto key = token.substr(0, eq);
        const auto value = token.substr(eq + 1);
        if (key == "model") {
            const auto radius = base.radius;
            apply_model_name(base, value);
            if (!base.radius) {
                base.radius = radius;
            }
        } else if (key == "distance") {
            base.distance = parse_distance(value);
        } else if (key == "L") {
            base.window = detail::parse_count(value, token);
        } else if (key == "K") {
            base.neighbors = detail::parse_count(value, token);
        } else if (key == "R") {
            if (value == "none" || value == "-") {
                base.radius.reset();
            } else {
                base.radius = static_cast<int>(detail::parse_count(value, token));
            }
        } else if (key == "outlier") {
            base.outlier = parse_outlier_policy(value);
        } else if (key == "step") {
            base.step = detail::parse_count(value, token);
        } else {
            throw std::invalid_argument("unknown hyperparameter '" + key + "'");
        }
    }
    return base;
}

HourlyModelBank HourlyModelBank::uniform(const HyperParams& hp) {
    HourlyModelBank bank;
    bank.hours.fill(hp);
    return bank;
}

void write_bank_csv(const std::string& path, const HourlyModelBank& bank) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write hourly bank " + path);
    }
    out << "hour,hyperparams\n";
    for (std::size_t h = 0; h < 24; ++h) {
        out << h << "," << describe(bank.hours[h]) << "\n";
    }
}

HourlyModelBank read_bank_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read hourly bank " + path);
    }
    HourlyModelBank bank;
    std::array<bool, 24> seen{};
    std::string line;
    std::getline(in, line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected hour,hyperparams");
        }
        const auto hour = detail::parse_count(detail::trim(line.substr(0, comma)), line);
        if (hour >= 24) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": hour out of range");
        }
        bank.hours[hour] = parse_hyperparams(line.substr(comma + 1));
        validate(bank.hours[hour]);
        seen[hour] = true;
    }
    for (std::size_t h = 0; h < 24; ++h) {
        if (!seen[h]) {
            throw std::invalid_argument(path + ": hourly bank has no entry for hour " + std::to_string(h));
        }
    }
    return bank;
}

ReferenceSet reference_for_target(const SimilarityPlan& plan, const SeriesContext& ctx, std::size_t target) {
    const auto offset = plan.hp.window + plan.hp.step - 1;
    if (target <= offset || target > ctx.targets.last_target) {
        throw std::out_of_range("target " + std::to_string(target) + " has no complete query trajectory");
    }
    const auto q = target - offset;
    if (q < plan.split.u) {
        return {q, 1, q > plan.hp.step ? q - plan.hp.step : 0};
    }
    return reference_for(q, plan.split, ctx.side_of(target));
}

CandidateSet find_candidates(const SimilarityPlan& plan, const SeriesContext& ctx, std::size_t target) {
    const auto& hp = plan.hp;
    const auto reference = reference_for_target(plan, ctx, target);
    const TrajectoryView query{reference.query, hp.window, hp.step};
    CandidateSet raw;
    if (hp.radius) {
        if (reference.empty()) {
            throw EmptyReferenceError("empty reference set for target " + std::to_string(target));
        }
        const auto members = seasonal_filter(reference, target_slot(query.start, hp.window, hp.step, ctx.start_slot()),
                                             *hp.radius, hp.window, hp.step, ctx.start_slot());
        raw = k_nearest(ctx.values(), query, members, hp.distance, hp.neighbors);
    } else {
        raw = k_nearest(ctx.values(), query, reference, hp.distance, hp.neighbors);
    }
    return apply_outlier_policy(raw, hp.outlier);
}

double point_from_candidates(const SimilarityPlan& plan, const SeriesContext& ctx, std::size_t target,
                             const CandidateSet& candidates) {
    const auto& m = plan.hp.model;
    switch (m.rule) {
    case PointRule::Mean:
        return forecast_mean(candidates);
    case PointRule::RankWeighted:
        return forecast_rank_weighted(candidates, m.rank);
    case PointRule::DistanceWeighted:
        return forecast_distance_weighted(candidates, m.weight);
    case PointRule::Global:
        if (!plan.weights) {
            throw std::logic_error("m3 forecast without fitted weights");
        }
        return forecast_global(candidates, *plan.weights);
    case PointRule::LocalRegression: {
        const auto offset = plan.hp.window + plan.hp.step - 1;
        return forecast_local_regression(ctx.values(), TrajectoryView{target - offset, plan.hp.window, plan.hp.step},
                                         candidates)
            .value;
    }
    }
    throw std::logic_error("unknown point rule");
}

double forecast_similarity(const SimilarityPlan& plan, const SeriesContext& ctx, std::size_t target) {
    return point_from_candidates(plan, ctx, target, find_candidates(plan, ctx, target));
}

SimilarityPlan plan_similarity(const SeriesContext& ctx, const HyperParams& hp,
                               const std::vector<std::size_t>& train_targets) {
    validate(hp);
    SimilarityPlan plan{hp, split_for(ctx.targets, hp.window, hp.step, ctx.floor), std::nullopt};
    if (hp.model.rule != PointRule::Global) {
        return plan;
    }
    std::vector<TuneExample> examples;
    auto add = [&](std::size_t t) {
        examples.push_back({find_candidates(plan, ctx, t), ctx.values()[t - 1]});
    };
    if (train_targets.empty()) {
        for (std::size_t t = ctx.first_target(Side::Tune); t <= ctx.last_target(Side::Tune); ++t) {
            add(t);
        }
    } else {
        for (const auto t : train_targets) {
            add(t);
        }
    }
    plan.weights = fit_global_weights(examples, hp.neighbors);
    return plan;
}

HourlyPlan plan_hourly(const SeriesContext& ctx, const HourlyModelBank& bank) {
    HourlyPlan plan;
    for (int h = 0; h < 24; ++h) {
        const auto& hp = bank.hours[static_cast<std::size_t>(h)];
        std::vector<std::size_t> train;
        if (hp.model.rule == PointRule::Global) {
            for (std::size_t t = ctx.first_target(Side::Tune); t <= ctx.last_target(Side::Tune); ++t) {
                if (ctx.hour_of(t) == h) {
                    train.push_back(t);
                }
            }
            if (train.empty()) {
                throw std::invalid_argument("no tune targets at hour " + std::to_string(h) + " to fit m3");
            }
        }
        plan.hours[static_cast<std::size_t>(h)] = plan_similarity(ctx, hp, train);
    }
    return plan;
}

const SimilarityPlan& plan_for(const HourlyPlan& plan, const SeriesContext& ctx, std::size_t target) {
    return plan.hours[static_cast<std::size_t>(ctx.hour_of(target))];
}

double forecast_hourly(const HourlyPlan& plan, const SeriesContext& ctx, std::size_t target) {
    return forecast_similarity(plan_for(plan, ctx, target), ctx, target);
}

PointModel parse_point_model(std::string_view name, const HyperParams& base) {
    const auto parts = detail::split(name, ':');
    if (parts.front() == "naive" && parts.size() == 1) {
        return model::Naive{};
    }
    if (parts.front() == "snaive") {
        model::SeasonalNaive m;
        if (parts.size() > 1) {
            m.period = detail::parse_count(parts[1], name);
        }
        if (parts.size() > 2) {
            m.depth = detail::parse_count(parts[2], name);
        }
        if (parts.size() > 3 || m.period < 1 || m.depth < 1) {
            throw std::invalid_argument("expected snaive:<period>:<depth>, got '" + std::string(name) + "'");
        }
        return m;
    }
    if (parts.front() == "ar") {
        if (parts.size() != 2) {
            throw std::invalid_argument("expected ar:<p>, got '" + std::string(name) + "'");
        }
        model::Ar m;
        m.order = detail::parse_count(parts[1], name);
        if (m.order < 1) {
            throw std::invalid_argument("AR order must be >= 1");
        }
        return m;
    }
    HyperParams hp = base;
    apply_model_name(hp, name);
    validate(hp);
    return model::Similarity{hp};
}

PreparedModel prepare(const SeriesContext& ctx, const PointModel& model, std::size_t step) {
    PreparedModel prepared;
    prepared.step = step;
    std::visit(overloaded{
                   [&](const model::Similarity& m) {
                       auto hp = m.hp;
                       hp.step = step;
                       prepared.state = plan_similarity(ctx, hp);
                   },
                   [&](const model::Hourly& m) {
                       auto bank = m.bank;
                       for (auto& hp : bank.hours) {
                           hp.step = step;
                       }
                       prepared.state = plan_hourly(ctx, bank);
                   },
                   [&](const model::Naive& m) { prepared.state = m; },
                   [&](const model::SeasonalNaive& m) { prepared.state = m; },
                   [&](const model::Ar& m) {
                       const auto train_end = ctx.targets.tune_first_target - 1;
                       prepared.state = fit_ar(ctx.values().first(train_end), m.order, m.intercept);
                   },
               },
               model);
    return prepared;
}

double forecast_point(const PreparedModel& model, const SeriesContext& ctx, std::size_t target) {
    const auto h = model.step;
    return std::visit(overloaded{
                          [&](const SimilarityPlan& p) { return forecast_similarity(p, ctx, target); },
                          [&](const HourlyPlan& p) { return forecast_hourly(p, ctx, target); },
                          [&](const model::Naive&) { return naive_forecast(ctx.values(), target, h); },
                          [&](const model::SeasonalNaive& m) {
                              return seasonal_naive_forecast(ctx.values(), target, m.period, m.depth, h);
                          },
                          [&](const ArModel& m) {
                              const auto p = m.order();
                              if (target < p + h) {
                                  throw std::out_of_range("AR forecast needs " + std::to_string(p) +
                                                          " observations before index " + std::to_string(target));
                              }
                              return ar_forecast(m, ctx.values().subspan(target - h - p, p), h);
                          },
                      },
                      model.state);
}

std::size_t earliest_target(const PreparedModel& model) {
    const auto h = model.step;
    auto similarity = [&](const HyperParams& hp) {
        const auto refs = hp.model.rule == PointRule::Global ? hp.neighbors : 1;
        return hp.window + 2 * h + refs - 1;
    };
    return std::visit(overloaded{
                          [&](const SimilarityPlan& p) { return similarity(p.hp); },
                          [&](const HourlyPlan& p) {
                              std::size_t e = 0;
                              for (const auto& hour : p.hours) {
                                  e = std::max(e, similarity(hour.hp));
                              }
                              return e;
                          },
                          [&](const model::Naive&) { return h + 1; },
                          [&](const model::SeasonalNaive& m) { return m.period * ((h + m.period - 1) / m.period) + 1; },
                          [&](const ArModel& m) { return m.order() + h; },
                      },
                      model.state);
}

IntervalMethod parse_interval_method(std::string_view name) {
    if (name == "hs") return IntervalMethod::Hs;
    if (name == "hs-s") return IntervalMethod::HsSeasonal;
    if (name == "st") return IntervalMethod::St;
    if (name == "st-s") return IntervalMethod::StSeasonal;
    if (name == "st-hourly") return IntervalMethod::StHourly;
    if (name == "mdst") return IntervalMethod::Mdst;
    if (name == "mdst-s") return IntervalMethod::MdstSeasonal;
    throw std::invalid_argument("unknown interval method '" + std::string(name) + "'");
}

std::string to_string(IntervalMethod method) {
    switch (method) {
    case IntervalMethod::Hs: return "hs";
    case IntervalMethod::HsSeasonal: return "hs-s";
    case IntervalMethod::St: return "st";
    case IntervalMethod::StSeasonal: return "st-s";
    case IntervalMethod::StHourly: return "st-hourly";
    case IntervalMethod::Mdst: return "mdst";
    case IntervalMethod::MdstSeasonal: return "mdst-s";
    }
    return "?";
}

bool needs_base_model(IntervalMethod method) {
    return method == IntervalMethod::Hs || method == IntervalMethod::HsSeasonal || method == IntervalMethod::Mdst ||
           method == IntervalMethod::MdstSeasonal;
}

IntervalSpec IntervalSpec::defaults(IntervalMethod method, std::size_t step) {
    IntervalSpec spec;
    spec.method = method;
    spec.st.window = 9;
    spec.st.neighbors = 60;
    if (method == IntervalMethod::StSeasonal) {
        spec.st.window = 4;
        spec.st.neighbors = 150;
        spec.st.radius = 5;
    }
    spec.st.step = step;
    spec.bank = HourlyModelBank::uniform(spec.st);
    if (method == IntervalMethod::MdstSeasonal) {
        spec.mdst.radius = 6;
    }
    return spec;
}

PreparedCandidateInterval prepare_candidate_interval(const SeriesContext& ctx, const IntervalSpec& spec) {
    switch (spec.method) {
    case IntervalMethod::St:
    case IntervalMethod::StSeasonal:
        return {plan_similarity(ctx, spec.st)};
    case IntervalMethod::StHourly:
        return {plan_hourly(ctx, spec.bank)};
    default:
        throw std::invalid_argument("interval method '" + to_string(spec.method) + "' is not candidate based");
    }
}

IntervalForecast forecast_candidate_interval(const PreparedCandidateInterval& model, const SeriesContext& ctx,
                                             std::size_t target, double alpha) {
    const SimilarityPlan& plan = std::visit(
        overloaded{
            [](const SimilarityPlan& p) -> const SimilarityPlan& { return p; },
            [&](const HourlyPlan& p) -> const SimilarityPlan& { return plan_for(p, ctx, target); },
        },
        model.plan);
    const auto candidates = find_candidates(plan, ctx, target);
    return {point_from_candidates(plan, ctx, target, candidates), st_interval(candidates, alpha)};
}

PredictionInterval error_based_interval(const IntervalSpec& spec, const SeriesContext& ctx, const ErrorSeries& errors,
                                        double forecast, std::size_t target, std::size_t step, double alpha) {
    switch (spec.method) {
    case IntervalMethod::Hs:
        return hs_interval(forecast, errors, target, step, spec.hs_window, alpha, false);
    case IntervalMethod::HsSeasonal:
        return hs_interval(forecast, errors, target, step, spec.hs_window, alpha, true);
    case IntervalMethod::Mdst:
    case IntervalMethod::MdstSeasonal:
        return mdst_interval(forecast, errors, target, step, spec.mdst, alpha, ctx.start_slot());
    default:
        throw std::invalid_argument("interval method '" + to_string(spec.method) + "' is not error based");
    }
}

std::size_t error_history_needed(const IntervalSpec& spec) {
    switch (spec.method) {
    case IntervalMethod::Hs:
        return spec.hs_window;
    case IntervalMethod::HsSeasonal:
        return static_cast<std::size_t>(kSlotsPerDay) * (spec.hs_window + 1);
    default:
        return spec.history;
    }
}

} // namespace trajacast
