#pragma once

#include "trajacast/gridsearch.hpp"
#include "trajacast/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace trajacast {

/// Raised with one line per offending key.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::vector<std::string>& problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct ModelEntry {
    std::string label;
    PointModel model;
};

struct IntervalEntry {
    std::string label;
    IntervalSpec spec;
};

struct ExperimentConfig {
    std::filesystem::path data;
    std::optional<Timestamp> tune_start;
    std::optional<Timestamp> test_start;
    std::size_t test_days = 0; ///< used when no dates are given
    ReferenceFloor floor = ReferenceFloor::EqualHistory;
    std::size_t step = 1;
    double alpha = 0.05;
    std::filesystem::path output = "trajacast-out";
    std::uint64_t seed = 1;
    std::vector<ModelEntry> models;
    std::vector<IntervalEntry> intervals;
    GridSpec grid = GridSpec::defaults();
    Objective objective = Objective::Mae;
    std::size_t folds = 1;
    bool dm = false;
    bool hourly = false;
};

/// Flat `key = value` lines; `#` starts a comment. Repeated keys `model` and
/// `interval` take `<label>: <name> [key=value ...]`. `overrides` are applied
/// after the file, in order. Throws ConfigError listing every bad key.
ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
ExperimentConfig parse_config(std::istream& in, const std::vector<std::string>& overrides = {},
                              const std::filesystem::path& base_dir = {});

/// Text describing every config key (shown by `--help`).
std::string config_help();

TargetSplit resolve_split(const ExperimentConfig& config, const TimeSeries& series);

struct RunOptions {
    std::size_t jobs = 1;
    bool dm = false;
    bool hourly = false;
};

/// Forecasts every configured model and interval and writes the reports into
/// config.output. Returns false when some model failed (its status is in
/// summary.csv); the remaining artifacts are still written.
bool cmd_run(const ExperimentConfig& config, const RunOptions& options, std::ostream& log);

/// Grid search (cross-validated when folds > 1) over config.grid; writes
/// leaderboard.csv and selected.txt, or bank.csv plus per-hour leaderboards
/// when `hourly` is set.
void cmd_tune(const ExperimentConfig& config, std::size_t jobs, bool hourly, std::ostream& log);

/// Entry point of the `trajacast` tool.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace trajacast
