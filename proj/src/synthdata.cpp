#include "trajacast/synthdata.hpp"

#include "overloaded.hpp"
#include "parse_util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace trajacast {

NormalStream::NormalStream(std::uint64_t seed) : engine_(seed) {}

double NormalStream::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::next() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

namespace {

using detail::overloaded;

void require_sd(double sd) {
    if (!(sd >= 0.0) || !std::isfinite(sd)) {
        throw std::invalid_argument("noise sd must be finite and >= 0");
    }
}

double smooth_peak(double hour, double center, double width) {
    const double z = (hour - center) / width;
    return std::exp(-0.5 * z * z);
}

std::vector<double> generate_values(const SynthSpec& spec) {
    NormalStream noise(spec.seed);
    std::vector<double> x(spec.length);
    const int start_slot = slot_of_day(spec.start);
    const auto day_of_week = [&](std::size_t i) {
        // 0 = Monday for the 1970-01-01 (Thursday) epoch.
        const auto days = std::chrono::floor<std::chrono::days>(spec.start).time_since_epoch().count() +
                          static_cast<long long>((static_cast<std::size_t>(start_slot) + i) / kSlotsPerDay);
        return static_cast<int>(((days + 3) % 7 + 7) % 7);
    };
    std::visit(overloaded{
                   [&](const synth::Ar& k) {
                       if (k.coefficients.empty()) {
                           throw std::invalid_argument("AR generator needs at least one coefficient");
                       }
                       require_sd(k.noise_sd);
                       std::vector<double> lags(k.coefficients.size(), k.initial);
                       for (std::size_t t = 0; t < spec.length; ++t) {
                           double v = k.intercept;
                           for (std::size_t i = 0; i < lags.size(); ++i) {
                               v += k.coefficients[i] * lags[i];
                           }
                           if (k.noise_sd > 0.0) {
                               v += k.noise_sd * noise.next();
                           }
                           v = std::max(v, 0.0);
                           lags.insert(lags.begin(), v);
                           lags.pop_back();
                           x[t] = v;
                       }
                   },
                   [&](const synth::DailySinusoid& k) {
                       require_sd(k.noise_sd);
                       for (std::size_t t = 0; t < spec.length; ++t) {
                           const auto slot = static_cast<double>((static_cast<std::size_t>(start_slot) + t) % kSlotsPerDay);
                           const double v = k.baseline +
                                            k.amplitude * std::sin(2.0 * std::numbers::pi * slot / kSlotsPerDay) +
                                            k.noise_sd * noise.next();
                           x[t] = std::max(v, 0.0);
                       }
                   },
                   [&](const synth::TwoRegime& k) {
                       require_sd(k.noise_sd);
                       for (std::size_t t = 0; t < spec.length; ++t) {
                           const auto slot = (static_cast<std::size_t>(start_slot) + t) % kSlotsPerDay;
                           const double hour = static_cast<double>(slot) / 4.0;
                           const bool weekend = day_of_week(t) >= 5;
                           double profile;
                           if (weekend) {
                               profile = k.night_level + (k.weekend_peak - k.night_level) * smooth_peak(hour, 14.0, 3.5);
                           } else {
                               profile = k.night_level +
                                         (k.weekday_peak - k.night_level) *
                                             std::max(smooth_peak(hour, 8.0, 1.5), smooth_peak(hour, 17.5, 2.0)) +
                                         0.35 * (k.weekday_peak - k.night_level) * smooth_peak(hour, 12.5, 3.0);
                           }
                           x[t] = std::max(profile + k.noise_sd * noise.next(), 0.0);
                       }
                   },
                   [&](const synth::PeriodicExact& k) {
                       if (k.period < 1) {
                           throw std::invalid_argument("periodic generator needs period >= 1");
                       }
                       std::vector<double> base(k.period);
                       for (auto& v : base) {
                           v = 100.0 + 900.0 * noise.uniform();
                       }
                       for (std::size_t t = 0; t < spec.length; ++t) {
                           x[t] = base[t % k.period];
                       }
                   },
               },
               spec.kind);
    return x;
}

} // namespace

TimeSeries generate(const SynthSpec& spec) {
    if (spec.length < 1) {
        throw std::invalid_argument("synthetic series length must be >= 1");
    }
    return TimeSeries(spec.start, generate_values(spec));
}

SynthKind parse_synth_kind(std::string_view text) {
    const auto parts = detail::split(text, ':');
    const auto& name = parts.front();
    auto arg = [&](std::size_t i) {
        if (i >= parts.size()) {
            throw std::invalid_argument("synthetic kind '" + std::string(text) + "' is missing arguments");
        }
        return detail::parse_number(parts[i], text);
    };
    if (name == "ar") {
        synth::Ar k;
        k.coefficients.clear();
        if (parts.size() < 3) {
            throw std::invalid_argument("expected ar:<coeffs>:<sd>[:<intercept>[:<x0>]]");
        }
        for (const auto& c : detail::split(parts[1], ',')) {
            k.coefficients.push_back(detail::parse_number(c, text));
        }
        k.noise_sd = arg(2);
        if (parts.size() > 3) {
            k.intercept = arg(3);
        }
        if (parts.size() > 4) {
            k.initial = arg(4);
        }
        return k;
    }
    if (name == "sinusoid") {
        synth::DailySinusoid k;
        if (parts.size() > 1) {
            k.amplitude = arg(1);
        }
        if (parts.size() > 2) {
            k.noise_sd = arg(2);
        }
        if (parts.size() > 3) {
            k.baseline = arg(3);
        }
        return k;
    }
    if (name == "two-regime") {
        synth::TwoRegime k;
        if (parts.size() > 1) {
            k.noise_sd = arg(1);
        }
        return k;
    }
    if (name == "periodic") {
        synth::PeriodicExact k;
        if (parts.size() > 1) {
            k.period = detail::parse_count(parts[1], text);
        }
        if (k.period < 1) {
            throw std::invalid_argument("periodic generator needs period >= 1");
        }
        return k;
    }
    throw std::invalid_argument("unknown synthetic kind '" + std::string(name) + "'");
}

} // namespace trajacast
