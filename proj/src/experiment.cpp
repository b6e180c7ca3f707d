#include "trajacast/experiment.hpp"

#include "trajacast/ingestion.hpp"
#include "trajacast/metrics.hpp"
#include "trajacast/parallel.hpp"
#include "trajacast/synthdata.hpp"

#include "format.hpp"
#include "parse_util.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace trajacast {
namespace {

using detail::format_double;

std::string join_lines(const std::vector<std::string>& lines) {
    std::string s = "invalid configuration:";
    for (const auto& l : lines) {
        s += "\n  " + l;
    }
    return s;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    throw std::invalid_argument("expected true/false, got '" + v + "'");
}

bool valid_label(const std::string& label) {
    return !label.empty() && std::all_of(label.begin(), label.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

/// Splits "<label>: <name> k=v ..." into label, name (may be empty) and the
/// remaining assignments.
struct EntryText {
    std::string label;
    std::string name;
    std::map<std::string, std::string> options;
};

EntryText parse_entry(const std::string& value) {
    const auto colon = value.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("expected '<label>: <name> [key=value ...]'");
    }
    EntryText e;
    e.label = detail::trim(value.substr(0, colon));
    if (!valid_label(e.label)) {
        throw std::invalid_argument("label '" + e.label + "' may only use letters, digits, '_', '-' and '.'");
    }
    std::istringstream in(value.substr(colon + 1));
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            if (!e.name.empty()) {
                throw std::invalid_argument("unexpected token '" + token + "'");
            }
            e.name = token;
        } else if (!e.options.emplace(token.substr(0, eq), token.substr(eq + 1)).second) {
            throw std::invalid_argument("duplicate option '" + token.substr(0, eq) + "'");
        }
    }
    return e;
}

std::string take(std::map<std::string, std::string>& options, const std::string& key) {
    const auto it = options.find(key);
    if (it == options.end()) {
        return {};
    }
    auto v = it->second;
    options.erase(it);
    return v;
}

/// Remaining options as a hyperparameter assignment string.
std::string rest(const std::map<std::string, std::string>& options) {
    std::string s;
    for (const auto& [k, v] : options) {
        s += k + "=" + v + " ";
    }
    return s;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
}

ModelEntry parse_model_entry(const std::string& value, const std::filesystem::path& base_dir) {
    auto e = parse_entry(value);
    if (e.name == "hourly") {
        const auto bank = take(e.options, "bank");
        if (!bank.empty()) {
            if (!e.options.empty()) {
                throw std::invalid_argument("hourly with bank= takes no other options");
            }
            return {e.label, model::Hourly{read_bank_csv(resolve(base_dir, bank).string())}};
        }
        auto hp = parse_hyperparams(rest(e.options));
        validate(hp);
        return {e.label, model::Hourly{HourlyModelBank::uniform(hp)}};
    }
    if (e.name.empty()) {
        auto hp = parse_hyperparams(rest(e.options));
        validate(hp);
        return {e.label, model::Similarity{hp}};
    }
    const auto intercept = take(e.options, "intercept");
    const bool similarity = e.name != "naive" && e.name.rfind("snaive", 0) != 0 && e.name.rfind("ar:", 0) != 0;
    HyperParams base;
    if (similarity) {
        base = parse_hyperparams(rest(e.options));
    } else if (!e.options.empty()) {
        throw std::invalid_argument("benchmark '" + e.name + "' takes no option '" + e.options.begin()->first + "'");
    }
    auto m = parse_point_model(e.name, base);
    if (auto* ar = std::get_if<model::Ar>(&m); ar && !intercept.empty()) {
        ar->intercept = parse_bool(intercept);
    } else if (!intercept.empty()) {
        throw std::invalid_argument("option 'intercept' only applies to ar:<p>");
    }
    return {e.label, m};
}

IntervalEntry parse_interval_entry(const std::string& value, const std::filesystem::path& base_dir) {
    auto e = parse_entry(value);
    const auto method = parse_interval_method(e.name);
    auto spec = IntervalSpec::defaults(method, 1);
    spec.base = take(e.options, "base");
    if (needs_base_model(method) != !spec.base.empty()) {
        throw std::invalid_argument(needs_base_model(method) ? "method '" + e.name + "' needs base=<model label>"
                                                             : "method '" + e.name + "' takes no base model");
    }
    if (const auto h = take(e.options, "history"); !h.empty()) {
        spec.history = detail::parse_count(h, value);
    }
    switch (method) {
    case IntervalMethod::St:
    case IntervalMethod::StSeasonal:
        spec.st = parse_hyperparams(rest(e.options), spec.st);
        validate(spec.st);
        break;
    case IntervalMethod::StHourly:
        if (const auto bank = take(e.options, "bank"); !bank.empty()) {
            spec.bank = read_bank_csv(resolve(base_dir, bank).string());
        } else {
            spec.st = parse_hyperparams(rest(e.options), spec.st);
            validate(spec.st);
            spec.bank = HourlyModelBank::uniform(spec.st);
        }
        break;
    case IntervalMethod::Hs:
    case IntervalMethod::HsSeasonal:
        if (const auto L = take(e.options, "L"); !L.empty()) {
            spec.hs_window = detail::parse_count(L, value);
        }
        if (spec.hs_window < 2) {
            throw std::invalid_argument("HS window must be >= 2");
        }
        if (!e.options.empty()) {
            throw std::invalid_argument("unknown HS option '" + e.options.begin()->first + "'");
        }
        break;
    case IntervalMethod::Mdst:
    case IntervalMethod::MdstSeasonal: {
        HyperParams hp;
        hp.window = spec.mdst.window;
        hp.neighbors = spec.mdst.neighbors;
        hp.distance = spec.mdst.distance;
        hp.radius = spec.mdst.radius;
        hp = parse_hyperparams(rest(e.options), hp);
        validate(hp);
        if (hp.neighbors < 2) {
            throw std::invalid_argument("MDST needs K >= 2");
        }
        spec.mdst.window = hp.window;
        spec.mdst.neighbors = hp.neighbors;
        spec.mdst.distance = hp.distance;
        spec.mdst.radius = hp.radius;
        break;
    }
    }
    return {e.label, spec};
}

struct Reports {
    std::filesystem::path dir;

    std::ofstream open(const std::string& name) const {
        std::ofstream out(dir / name);
        if (!out) {
            throw std::runtime_error("cannot write " + (dir / name).string());
        }
        return out;
    }
};

/// Forecasts and intervals of one configured entry over the tune and test targets.
struct EntryResult {
    std::string label;
    std::string status = "ok";
    bool has_interval = false;
    std::vector<double> forecast;                 ///< index t - first target
    std::vector<PredictionInterval> intervals;
    ErrorSeries errors;                           ///< base models only
};

std::string metric_or_empty(double v, bool defined = true) {
    return defined && std::isfinite(v) ? format_double(v) : "";
}

std::string status_text(const std::exception& e) {
    std::string s = "failed: ";
    s += e.what();
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

} // namespace

ConfigError::ConfigError(const std::vector<std::string>& problems)
    : std::invalid_argument(join_lines(problems)), problems_(problems) {}

ExperimentConfig parse_config(std::istream& in, const std::vector<std::string>& overrides,
                              const std::filesystem::path& base_dir) {
    ExperimentConfig c;
    c.models.clear();
    std::vector<std::string> problems;
    std::optional<bool> ar_intercept;
    std::set<std::string> labels;

    auto apply = [&](const std::string& where, const std::string& line) {
        const auto text = detail::trim(line.substr(0, line.find('#')));
        if (text.empty()) {
            return;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            problems.push_back(where + ": expected key = value");
            return;
        }
        const auto key = detail::trim(text.substr(0, eq));
        const auto value = detail::trim(text.substr(eq + 1));
        try {
            if (key == "data") {
                c.data = resolve(base_dir, value);
            } else if (key == "tune_start") {
                c.tune_start = parse_timestamp(value);
            } else if (key == "test_start") {
                c.test_start = parse_timestamp(value);
            } else if (key == "test_days") {
                c.test_days = detail::parse_count(value, key);
            } else if (key == "floor") {
                if (value == "equal-history") {
                    c.floor = ReferenceFloor::EqualHistory;
                } else if (value == "first") {
                    c.floor = ReferenceFloor::First;
                } else {
                    throw std::invalid_argument("expected equal-history or first");
                }
            } else if (key == "step") {
                c.step = detail::parse_count(value, key);
                if (c.step < 1) {
                    throw std::invalid_argument("step must be >= 1");
                }
            } else if (key == "alpha") {
                c.alpha = detail::parse_number(value, key);
                validate_alpha(c.alpha);
            } else if (key == "output") {
                c.output = resolve(base_dir, value);
            } else if (key == "seed") {
                c.seed = detail::parse_count(value, key);
            } else if (key == "model") {
                auto entry = parse_model_entry(value, base_dir);
                if (!labels.insert(entry.label).second) {
                    throw std::invalid_argument("duplicate label '" + entry.label + "'");
                }
                c.models.push_back(std::move(entry));
            } else if (key == "interval") {
                auto entry = parse_interval_entry(value, base_dir);
                if (!labels.insert(entry.label).second) {
                    throw std::invalid_argument("duplicate label '" + entry.label + "'");
                }
                c.intervals.push_back(std::move(entry));
            } else if (key == "grid.L") {
                c.grid.windows = parse_count_list(value);
            } else if (key == "grid.K") {
                c.grid.neighbors = parse_count_list(value);
            } else if (key == "grid.R") {
                c.grid.radii = parse_radius_list(value);
            } else if (key == "grid.distance") {
                c.grid.distances = parse_distance_list(value);
            } else if (key == "grid.model") {
                c.grid.models = parse_model_list(value);
            } else if (key == "grid.outlier") {
                c.grid.outliers = parse_outlier_list(value);
            } else if (key == "objective") {
                c.objective = parse_objective(value);
            } else if (key == "folds") {
                c.folds = detail::parse_count(value, key);
                if (c.folds < 1) {
                    throw std::invalid_argument("folds must be >= 1");
                }
            } else if (key == "dm") {
                c.dm = parse_bool(value);
            } else if (key == "hourly") {
                c.hourly = parse_bool(value);
            } else if (key == "ar_intercept") {
                ar_intercept = parse_bool(value);
            } else {
                problems.push_back(where + ": unknown key '" + key + "'");
            }
        } catch (const std::exception& e) {
            problems.push_back(where + ": key '" + key + "': " + e.what());
        }
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        apply("line " + std::to_string(++line_no), line);
    }
    for (const auto& o : overrides) {
        apply("override '" + o + "'", o);
    }

    if (ar_intercept) {
        for (auto& m : c.models) {
            if (auto* ar = std::get_if<model::Ar>(&m.model)) {
                ar->intercept = *ar_intercept;
            }
        }
    }
    if (c.data.empty()) {
        problems.push_back("key 'data': required");
    }
    if (c.tune_start.has_value() != c.test_start.has_value()) {
        problems.push_back("keys 'tune_start'/'test_start': give both or neither");
    }
    if (!c.test_start && c.test_days == 0) {
        problems.push_back("key 'test_days': required when tune_start/test_start are absent");
    }
    for (const auto& i : c.intervals) {
        if (!i.spec.base.empty() && std::none_of(c.models.begin(), c.models.end(),
                                                 [&](const ModelEntry& m) { return m.label == i.spec.base; })) {
            problems.push_back("interval '" + i.label + "': base model '" + i.spec.base + "' is not defined");
        }
    }
    if (!problems.empty()) {
        throw ConfigError(problems);
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config " + path.string());
    }
    return parse_config(in, overrides, path.parent_path());
}

std::string config_help() {
    return R"(Config file keys (flat `key = value`, `#` comments; override with --set key=value):
  data = <path>            series file (timestamp,flow) written by `ingest` or `synth`
  tune_start = <time>      first tune target; needs test_start as well
  test_start = <time>      first test target; tune and test are equally long
  test_days = <n>          alternative: the last n days are the test split
  floor = equal-history|first   test reference floor w (default equal-history)
  step = <h>               forecast horizon in 15-minute slots (default 1)
  alpha = <a>              interval level 1-a (default 0.05)
  output = <dir>           report directory (default trajacast-out)
  seed = <n>               random seed
  model = <label>: <name> [key=value ...]
        names: mean, m1:f1..f5, m2:g1..g4, m3, localreg (optional +seasonal:<R>),
               hourly [bank=<csv>], naive, snaive:<period>:<depth>, ar:<p> [intercept=false]
        keys: distance= L= K= R= outlier=
  interval = <label>: <method> [key=value ...]
        methods: st, st-s, st-hourly [bank=<csv>] (keys model= distance= L= K= R= outlier=),
                 hs, hs-s (base=<model label> L=<window>),
                 mdst, mdst-s (base=<model label> distance= L= K= R= history=<slots>)
  grid.L, grid.K = lists such as 2-20 or 5-200/5 or 10,25
  grid.R = radii or none; grid.distance, grid.model (m1:* expands), grid.outlier = lists
  objective = mae|winkler  tuning objective
  folds = <n>              cross-validation folds (1 = plain tune split)
  dm = true|false          per-hour DM tests and Winkler DM matrix
  hourly = true|false      per-hour metric breakdown
  ar_intercept = true|false
Distances: euclidean, weuclidean, manhattan, lp:<p>, sup, headtail:<l1>:<l2>[:abs|sq],
           cosine, pearson, canberra, lcs:<eps>:<delta>
Outlier policies: none, winsor, tailc:<c1>:<c2>, tailp:<g1>:<g2>, zscore:<tau>
)";
}

TargetSplit resolve_split(const ExperimentConfig& config, const TimeSeries& series) {
    if (config.tune_start && config.test_start) {
        return build_target_split(series, SplitDates{*config.tune_start, *config.test_start});
    }
    const auto T = series.size();
    const auto test = config.test_days * static_cast<std::size_t>(kSlotsPerDay);
    if (2 * test >= T) {
        throw std::invalid_argument("series of " + std::to_string(T) + " slots is too short for " +
                                    std::to_string(config.test_days) + " test day(s) plus an equal tune split");
    }
    const auto b = T - test + 1;
    return make_target_split(T, 2 * b - T - 1, b);
}

bool cmd_run(const ExperimentConfig& config, const RunOptions& options, std::ostream& log) {
    if (config.models.empty() && config.intervals.empty()) {
        throw std::invalid_argument("nothing to run: configure at least one model or interval");
    }
    const auto series = read_series_csv(config.data);
    const SeriesContext ctx{&series, resolve_split(config, series), config.floor};
    const auto a = ctx.targets.tune_first_target;
    const auto b = ctx.targets.test_first_target;
    const auto T = ctx.targets.last_target;
    const auto n = T - a + 1;
    const auto h = config.step;
    const auto values = series.values();
    const auto jobs = std::max<std::size_t>(options.jobs, 1);

    std::map<std::string, std::size_t> history;
    for (const auto& i : config.intervals) {
        if (!i.spec.base.empty()) {
            auto& need = history[i.spec.base];
            need = std::max(need, error_history_needed(i.spec) + h);
        }
    }

    std::vector<EntryResult> results;
    std::map<std::string, std::size_t> index_of;
    for (const auto& entry : config.models) {
        EntryResult r;
        r.label = entry.label;
        try {
            const auto prepared = prepare(ctx, entry.model, h);
            const auto need = history.count(entry.label) ? history[entry.label] : 0;
            const auto lo = std::min(a, std::max(earliest_target(prepared), a > need ? a - need : 1));
            std::vector<double> f(T - lo + 1, std::nan(""));
            std::vector<std::string> failure(f.size());
            parallel_for(f.size(), jobs, [&](std::size_t i) {
                try {
                    f[i] = forecast_point(prepared, ctx, lo + i);
                } catch (const std::exception& e) {
                    failure[i] = e.what();
                }
            });
            for (std::size_t t = a; t <= T; ++t) {
                if (!failure[t - lo].empty()) {
                    throw std::runtime_error("target " + format_timestamp(series.time_at(t)) + ": " + failure[t - lo]);
                }
            }
            std::size_t start = lo;
            for (std::size_t t = lo; t < a; ++t) {
                if (!failure[t - lo].empty()) {
                    start = t + 1;
                }
            }
            r.forecast.assign(f.begin() + static_cast<std::ptrdiff_t>(a - lo), f.end());
            r.errors.first_index = start;
            for (std::size_t t = start; t <= T; ++t) {
                r.errors.errors.push_back(f[t - lo] - values[t - 1]);
            }
        } catch (const std::exception& e) {
            r.status = status_text(e);
        }
        index_of[r.label] = results.size();
        results.push_back(std::move(r));
    }

    for (const auto& entry : config.intervals) {
        EntryResult r;
        r.label = entry.label;
        r.has_interval = true;
        try {
            auto spec = entry.spec;
            spec.st.step = h;
            for (auto& hp : spec.bank.hours) {
                hp.step = h;
            }
            r.forecast.assign(n, 0.0);
            r.intervals.assign(n, PredictionInterval{});
            if (needs_base_model(spec.method)) {
                const auto& base = results[index_of.at(spec.base)];
                if (base.status != "ok") {
                    throw std::runtime_error("base model '" + spec.base + "' failed");
                }
                parallel_for(n, jobs, [&](std::size_t i) {
                    r.forecast[i] = base.forecast[i];
                    r.intervals[i] =
                        error_based_interval(spec, ctx, base.errors, base.forecast[i], a + i, h, config.alpha);
                });
            } else {
                const auto prepared = prepare_candidate_interval(ctx, spec);
                parallel_for(n, jobs, [&](std::size_t i) {
                    const auto f = forecast_candidate_interval(prepared, ctx, a + i, config.alpha);
                    r.forecast[i] = f.forecast;
                    r.intervals[i] = f.interval;
                });
            }
        } catch (const std::exception& e) {
            r.status = status_text(e);
        }
        results.push_back(std::move(r));
    }

    std::filesystem::create_directories(config.output);
    const Reports reports{config.output};
    auto actual = [&](std::size_t i) { return values[a + i - 1]; };

    auto evaluate = [&](const EntryResult& r, std::size_t from, std::size_t to, auto&& keep) {
        std::vector<double> f, y;
        std::vector<PredictionInterval> iv;
        for (std::size_t i = from; i < to; ++i) {
            if (!keep(a + i)) {
                continue;
            }
            f.push_back(r.forecast[i]);
            y.push_back(actual(i));
            if (r.has_interval) {
                iv.push_back(r.intervals[i]);
            }
        }
        std::string row;
        const auto p = point_metrics(f, y);
        row += format_double(p.mae) + "," + metric_or_empty(p.mape, p.mape_defined) + ",";
        if (r.has_interval) {
            const auto m = interval_metrics(iv, y, config.alpha);
            row += format_double(m.uc) + "," + format_double(m.winkler);
        } else {
            row += ",";
        }
        row += "," + std::to_string(p.n);
        return row;
    };
    const auto all = [](std::size_t) { return true; };

    bool ok = true;
    {
        auto out = reports.open("summary.csv");
        out << "model,split,mae,mape,uc,winkler,n,status\n";
        for (const auto& r : results) {
            if (r.status != "ok") {
                ok = false;
                out << r.label << ",tune,,,,,," << r.status << "\n" << r.label << ",test,,,,,," << r.status << "\n";
                log << r.label << ": " << r.status << "\n";
                continue;
            }
            out << r.label << ",tune," << evaluate(r, 0, b - a, all) << ",ok\n";
            const auto test_row = evaluate(r, b - a, n, all);
            out << r.label << ",test," << test_row << ",ok\n";
            log << r.label << " test: mae,mape,uc,winkler,n = " << test_row << "\n";
        }
    }

    for (const auto& r : results) {
        if (r.status != "ok") {
            continue;
        }
        auto out = reports.open("forecasts_" + r.label + ".csv");
        out << "t,actual,forecast,lower,upper\n";
        for (std::size_t i = b - a; i < n; ++i) {
            out << format_timestamp(series.time_at(a + i)) << ',' << format_double(actual(i)) << ','
                << format_double(r.forecast[i]) << ',';
            if (r.has_interval) {
                out << format_double(r.intervals[i].lower) << ',' << format_double(r.intervals[i].upper);
            } else {
                out << ',';
            }
            out << '\n';
        }
    }

    if (options.hourly || config.hourly) {
        auto out = reports.open("hourly_metrics.csv");
        out << "model,hour,mae,mape,uc,winkler,n\n";
        for (const auto& r : results) {
            if (r.status != "ok") {
                continue;
            }
            for (int hour = 0; hour < 24; ++hour) {
                out << r.label << ',' << hour << ','
                    << evaluate(r, b - a, n, [&](std::size_t t) { return ctx.hour_of(t) == hour; }) << '\n';
            }
        }
    }

    // Diebold-Mariano comparisons on the test split.
    std::vector<const EntryResult*> good;
    for (const auto& r : results) {
        if (r.status == "ok") {
            good.push_back(&r);
        }
    }
    auto losses = [&](const EntryResult& r, bool winkler, std::optional<int> hour) {
        std::vector<double> loss;
        for (std::size_t i = b - a; i < n; ++i) {
            if (hour && ctx.hour_of(a + i) != *hour) {
                continue;
            }
            loss.push_back(winkler ? winkler_score(r.intervals[i], actual(i), config.alpha)
                                   : std::abs(r.forecast[i] - actual(i)));
        }
        return loss;
    };
    auto dm_cell = [&](const std::vector<double>& la, const std::vector<double>& lb) -> DmResult {
        return dm_test_losses(la, lb, h);
    };
    auto write_matrix = [&](const std::string& name, bool winkler) {
        std::vector<const EntryResult*> set;
        for (const auto* r : good) {
            if (!winkler || r->has_interval) {
                set.push_back(r);
            }
        }
        auto out = reports.open(name);
        out << "model";
        for (const auto* r : set) {
            out << ',' << r->label;
        }
        out << '\n';
        std::vector<std::vector<double>> loss;
        for (const auto* r : set) {
            loss.push_back(losses(*r, winkler, std::nullopt));
        }
        for (std::size_t i = 0; i < set.size(); ++i) {
            out << set[i]->label;
            for (std::size_t j = 0; j < set.size(); ++j) {
                out << ',';
                if (i == j || loss[i].size() < kDmMinSamples) {
                    out << "n/a";
                } else {
                    out << format_double(dm_cell(loss[i], loss[j]).p_value);
                }
            }
            out << '\n';
        }
    };
    write_matrix("dm_matrix.csv", false);
    if (options.dm || config.dm) {
        write_matrix("dm_winkler_matrix.csv", true);
        auto out = reports.open("dm_hourly.csv");
        out << "hour,model_a,model_b,loss,statistic,p_value\n";
        for (int hour = 0; hour < 24; ++hour) {
            for (std::size_t i = 0; i < good.size(); ++i) {
                for (std::size_t j = i + 1; j < good.size(); ++j) {
                    for (const bool winkler : {false, true}) {
                        if (winkler && !(good[i]->has_interval && good[j]->has_interval)) {
                            continue;
                        }
                        const auto la = losses(*good[i], winkler, hour);
                        const auto lb = losses(*good[j], winkler, hour);
                        out << hour << ',' << good[i]->label << ',' << good[j]->label << ','
                            << (winkler ? "winkler" : "abs") << ',';
                        if (la.size() < kDmMinSamples) {
                            out << "n/a,n/a\n";
                        } else {
                            const auto d = dm_cell(la, lb);
                            out << format_double(d.statistic) << ',' << format_double(d.p_value) << '\n';
                        }
                    }
                }
            }
        }
    }
    return ok;
}

void cmd_tune(const ExperimentConfig& config, std::size_t jobs, bool hourly, std::ostream& log) {
    const auto series = read_series_csv(config.data);
    const SeriesContext ctx{&series, resolve_split(config, series), config.floor};
    auto grid = config.grid;
    grid.step = config.step;
    EvalOptions options;
    options.objective = config.objective;
    options.alpha = config.alpha;
    options.jobs = std::max<std::size_t>(jobs, 1);
    std::filesystem::create_directories(config.output);
    const Reports reports{config.output};
    if (hourly) {
        const auto tuning = tune_hourly_bank(grid, ctx, config.folds, options);
        write_bank_csv((config.output / "bank.csv").string(), tuning.bank);
        for (std::size_t hour = 0; hour < 24; ++hour) {
            auto out = reports.open("leaderboard_hour_" + std::string(hour < 10 ? "0" : "") + std::to_string(hour) +
                                    ".csv");
            write_leaderboard_csv(out, tuning.boards[hour]);
            log << "hour " << hour << ": " << describe(tuning.bank.hours[hour]) << "\n";
        }
        return;
    }
    const auto board = config.folds > 1 ? run_cv(grid, ctx, config.folds, options) : run_grid(grid, ctx, options);
    {
        auto out = reports.open("leaderboard.csv");
        write_leaderboard_csv(out, board);
    }
    const auto& best = board.selected();
    auto out = reports.open("selected.txt");
    out << "model = best: " << describe(best.hp) << "\n";
    log << "selected: " << describe(best.hp) << " (tune " << to_string(config.objective) << " "
        << format_double(best.tune_metric) << ", test " << format_double(best.test_metric) << ")\n";
}

namespace {

struct ForecastFile {
    std::string label;
    std::vector<std::string> times;
    std::vector<double> actual, forecast, lower, upper;
    bool has_interval = true;
};

ForecastFile read_forecast_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    ForecastFile f;
    f.label = path.stem().string();
    if (f.label.rfind("forecasts_", 0) == 0) {
        f.label = f.label.substr(10);
    }
    std::string line;
    std::getline(in, line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        const auto cells = detail::split(line, ',');
        const auto where = path.string() + ":" + std::to_string(line_no);
        if (cells.size() != 5) {
            throw std::invalid_argument(where + ": expected t,actual,forecast,lower,upper");
        }
        f.times.push_back(cells[0]);
        f.actual.push_back(detail::parse_number(cells[1], where));
        f.forecast.push_back(detail::parse_number(cells[2], where));
        if (cells[3].empty() || cells[4].empty()) {
            f.has_interval = false;
            f.lower.push_back(0.0);
            f.upper.push_back(0.0);
        } else {
            f.lower.push_back(detail::parse_number(cells[3], where));
            f.upper.push_back(detail::parse_number(cells[4], where));
        }
    }
    return f;
}

int cmd_compare(const std::vector<std::string>& files, const std::string& loss_name, std::size_t step, double alpha,
                const std::filesystem::path& output, std::ostream& out) {
    if (files.size() < 2) {
        throw std::invalid_argument("compare needs at least two forecast files");
    }
    std::vector<ForecastFile> data;
    for (const auto& f : files) {
        data.push_back(read_forecast_file(f));
        if (data.back().times != data.front().times) {
            throw std::invalid_argument(f + ": timestamps differ from " + files.front());
        }
    }
    const bool winkler = loss_name == "winkler";
    if (!winkler && loss_name != "abs" && loss_name != "squared") {
        throw std::invalid_argument("loss must be abs, squared or winkler");
    }
    auto losses = [&](const ForecastFile& f, std::optional<int> hour) {
        if (winkler && !f.has_interval) {
            throw std::invalid_argument(f.label + " has no intervals for the winkler loss");
        }
        std::vector<double> l;
        for (std::size_t i = 0; i < f.times.size(); ++i) {
            if (hour && slot_of_day(parse_timestamp(f.times[i])) / 4 != *hour) {
                continue;
            }
            const double e = f.forecast[i] - f.actual[i];
            l.push_back(winkler ? winkler_score({f.lower[i], f.upper[i], alpha}, f.actual[i], alpha)
                                : loss_name == "abs" ? std::abs(e) : e * e);
        }
        return l;
    };
    std::filesystem::create_directories(output);
    std::ofstream matrix(output / "dm_matrix.csv");
    std::ofstream hourly(output / "dm_hourly.csv");
    if (!matrix || !hourly) {
        throw std::runtime_error("cannot write reports into " + output.string());
    }
    matrix << "model";
    for (const auto& f : data) {
        matrix << ',' << f.label;
    }
    matrix << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        matrix << data[i].label;
        for (std::size_t j = 0; j < data.size(); ++j) {
            if (i == j) {
                matrix << ",n/a";
                continue;
            }
            const auto d = dm_test_losses(losses(data[i], std::nullopt), losses(data[j], std::nullopt), step);
            matrix << ',' << format_double(d.p_value);
            if (i < j) {
                out << data[i].label << " vs " << data[j].label << ": DM " << format_double(d.statistic) << ", p "
                    << format_double(d.p_value) << "\n";
            }
        }
        matrix << '\n';
    }
    hourly << "hour,model_a,model_b,loss,statistic,p_value\n";
    for (int hour = 0; hour < 24; ++hour) {
        for (std::size_t i = 0; i < data.size(); ++i) {
            for (std::size_t j = i + 1; j < data.size(); ++j) {
                const auto la = losses(data[i], hour);
                const auto lb = losses(data[j], hour);
                hourly << hour << ',' << data[i].label << ',' << data[j].label << ',' << loss_name << ',';
                if (la.size() < kDmMinSamples) {
                    hourly << "n/a,n/a\n";
                } else {
                    const auto d = dm_test_losses(la, lb, step);
                    hourly << format_double(d.statistic) << ',' << format_double(d.p_value) << '\n';
                }
            }
        }
    }
    return 0;
}

std::size_t resolve_jobs(std::size_t jobs) {
    return jobs > 0 ? jobs : default_jobs();
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"trajacast: trajectory-similarity forecasting of 15-minute traffic flow"};
    app.require_subcommand(1);
    app.footer(config_help());

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Parse a raw 5-minute CSV, aggregate to 15 minutes and impute gaps");
    std::string input, series_out, report_path;
    ColumnMap columns;
    bool no_aggregate = false;
    ingest->add_option("--input", input, "Raw CSV file")->required();
    ingest->add_option("--output", series_out, "Series file to write")->required();
    ingest->add_option("--ts-col", columns.timestamp_column, "Timestamp column name")->capture_default_str();
    ingest->add_option("--flow-col", columns.flow_column, "Flow column name")->capture_default_str();
    ingest->add_option("--time-format", columns.time_format, "strptime-style timestamp format (default: auto)");
    ingest->add_option("--missing-token", columns.missing_token, "Extra missing-value sentinel");
    ingest->add_option("--report", report_path, "Also write the imputation report here");
    ingest->add_flag("--no-aggregate", no_aggregate, "Input is already at 15-minute cadence");

    // shared config options
    std::string config_path;
    std::vector<std::string> overrides;
    std::size_t jobs = 0;
    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Experiment config file")->required();
        cmd->add_option("--set", overrides, "Override a config key (key=value); repeatable");
    };

    auto* split = app.add_subcommand("split", "Show the tune/test split of a config");
    add_config(split);
    std::size_t split_window = 0;
    split->add_option("--window", split_window, "Also print query indices u, s, w for this L");

    auto* tune = app.add_subcommand("tune", "Grid search on the tune split; writes leaderboard.csv");
    add_config(tune);
    bool tune_hourly = false;
    tune->add_option("--jobs", jobs, "Worker threads (default: TRAJACAST_JOBS or all cores)");
    tune->add_flag("--hourly", tune_hourly, "Tune one model per hour of day; writes bank.csv");

    auto* run = app.add_subcommand("run", "Forecast, evaluate and write reports");
    add_config(run);
    RunOptions run_options;
    std::optional<double> alpha;
    std::string output_dir;
    bool ar_no_intercept = false;
    run->add_option("--jobs", jobs, "Worker threads (default: TRAJACAST_JOBS or all cores)");
    run->add_flag("--dm", run_options.dm, "Per-hour DM tests and Winkler DM matrix");
    run->add_flag("--hourly", run_options.hourly, "Per-hour metric breakdown");
    run->add_option("--alpha", alpha, "Interval level 1-alpha");
    run->add_option("--output", output_dir, "Report directory");
    run->add_flag("--ar-no-intercept", ar_no_intercept, "Fit AR benchmarks without an intercept");

    auto* compare = app.add_subcommand("compare", "Diebold-Mariano tests between forecast files");
    std::vector<std::string> compare_files;
    std::string loss = "abs";
    std::size_t compare_step = 1;
    double compare_alpha = 0.05;
    std::string compare_out = ".";
    compare->add_option("files", compare_files, "forecasts_<label>.csv files")->required()->expected(2, -1);
    compare->add_option("--loss", loss, "abs, squared or winkler")->capture_default_str();
    compare->add_option("--step", compare_step, "Forecast horizon h")->capture_default_str();
    compare->add_option("--alpha", compare_alpha, "Interval level for the winkler loss")->capture_default_str();
    compare->add_option("--output", compare_out, "Directory for dm_matrix.csv and dm_hourly.csv");

    auto* synth = app.add_subcommand("synth", "Write a synthetic series file");
    std::string kind = "sinusoid:300:20";
    std::size_t length = 96 * 28;
    std::uint64_t seed = 1;
    std::string start = "2020-01-06T00:00";
    std::string synth_out;
    synth->add_option("--kind", kind, "ar:<c1,..>:<sd>[:<c>[:<x0>]], sinusoid:<amp>:<sd>, two-regime:<sd>, periodic:<n>")
        ->capture_default_str();
    synth->add_option("--length", length, "Number of 15-minute slots")->capture_default_str();
    synth->add_option("--seed", seed, "Random seed")->capture_default_str();
    synth->add_option("--start", start, "First timestamp")->capture_default_str();
    synth->add_option("--output", synth_out, "Series file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*ingest) {
            auto raw = parse_csv(input, columns);
            if (!no_aggregate) {
                raw = aggregate_15min(raw);
            }
            const auto result = impute_missing_with_report(raw);
            write_series_csv(series_out, result.series);
            std::ostringstream report;
            report << "slots: " << result.series.size() << "\n"
                   << "imputed: " << result.report.total() << "\n"
                   << "imputed(previous-week): " << result.report.previous_week << "\n"
                   << "imputed(three-week-mean): " << result.report.three_week_mean << "\n";
            out << report.str();
            if (!report_path.empty()) {
                std::ofstream(report_path) << report.str();
            }
            return 0;
        }
        if (*synth) {
            SynthSpec spec;
            spec.kind = parse_synth_kind(kind);
            spec.length = length;
            spec.seed = seed;
            spec.start = parse_timestamp(start);
            write_series_csv(synth_out, generate(spec));
            return 0;
        }
        if (*compare) {
            return cmd_compare(compare_files, loss, compare_step, compare_alpha, compare_out, out);
        }
        if (ar_no_intercept) {
            overrides.push_back("ar_intercept = false");
        }
        if (alpha) {
            overrides.push_back("alpha = " + format_double(*alpha));
        }
        auto config = load_config(config_path, overrides);
        if (!output_dir.empty()) {
            config.output = output_dir;
        }
        if (*split) {
            const auto series = read_series_csv(config.data);
            const auto t = resolve_split(config, series);
            out << "series: " << series.size() << " slots from " << format_timestamp(series.start()) << "\n"
                << "tune targets: " << t.tune_first_target << ".." << t.test_first_target - 1 << " ("
                << format_timestamp(series.time_at(t.tune_first_target)) << " .. "
                << format_timestamp(series.time_at(t.test_first_target - 1)) << ")\n"
                << "test targets: " << t.test_first_target << ".." << t.last_target << " ("
                << format_timestamp(series.time_at(t.test_first_target)) << " .. "
                << format_timestamp(series.time_at(t.last_target)) << ")\n"
                << "queries per side: " << t.query_count() << "\n";
            if (split_window > 0) {
                const auto s = split_for(t, split_window, config.step, config.floor);
                out << "L=" << split_window << " h=" << config.step << ": u=" << s.u << " s=" << s.s << " w=" << s.w
                    << " last=" << s.last_query() << "\n";
            }
            return 0;
        }
        if (*tune) {
            cmd_tune(config, resolve_jobs(jobs), tune_hourly, out);
            return 0;
        }
        if (*run) {
            run_options.jobs = resolve_jobs(jobs);
            return cmd_run(config, run_options, out) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace trajacast
