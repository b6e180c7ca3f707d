#pragma once

#include "trajacast/series.hpp"

#include <cstdint>
#include <random>
#include <string_view>
#include <variant>
#include <vector>

namespace trajacast {

namespace synth {

/// x_t = intercept + Σ coefficients[i]·x_{t-1-i} + N(0, noise_sd²), clamped at
/// zero; lags before the first value are `initial`.
struct Ar {
    std::vector<double> coefficients{0.5};
    double intercept = 0.0;
    double noise_sd = 1.0;
    double initial = 0.0;
};

/// baseline + amplitude·sin(2π·slot/96) + N(0, noise_sd²), clamped at zero.
struct DailySinusoid {
    double amplitude = 300.0;
    double noise_sd = 20.0;
    double baseline = 1000.0;
};

/// Smooth rush-hour day profiles for weekdays and weekends plus noise.
struct TwoRegime {
    double weekday_peak = 1400.0;
    double weekend_peak = 900.0;
    double night_level = 150.0;
    double noise_sd = 20.0;
};

/// One seeded random period of values in [100, 1000), repeated exactly.
struct PeriodicExact {
    std::size_t period = kSlotsPerDay;
};

} // namespace synth

using SynthKind = std::variant<synth::Ar, synth::DailySinusoid, synth::TwoRegime, synth::PeriodicExact>;

struct SynthSpec {
    SynthKind kind = synth::DailySinusoid{};
    std::size_t length = kSlotsPerDay * 7;
    std::uint64_t seed = 1;
    Timestamp start = parse_timestamp("2020-01-06T00:00"); ///< a Monday midnight
};

/// Deterministic for a given spec: noise comes from std::mt19937_64 seeded with
/// `seed`, transformed by the Box-Muller method.
TimeSeries generate(const SynthSpec& spec);

/// Parses `ar:<c1>[,c2...]:<sd>[:<intercept>[:<x0>]]`, `sinusoid:<amplitude>:<sd>`,
/// `two-regime:<sd>` or `periodic:<period>`.
SynthKind parse_synth_kind(std::string_view text);

/// Portable standard normal stream.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed);
    double next();

    /// Uniform on (0, 1) built from the top 53 bits of the engine output.
    double uniform();

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace trajacast
