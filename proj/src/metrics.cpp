#include "trajacast/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace trajacast {
namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                                    std::to_string(b) + ")");
    }
    if (a == 0) {
        throw std::invalid_argument(std::string(what) + ": empty input");
    }
}

} // namespace

PointEvaluation point_metrics(std::span<const double> forecasts, std::span<const double> actuals) {
    require_same_length(forecasts.size(), actuals.size(), "point_metrics");
    PointEvaluation e;
    e.n = actuals.size();
    double abs_sum = 0.0;
    double pct_sum = 0.0;
    for (std::size_t i = 0; i < e.n; ++i) {
        const double err = std::abs(forecasts[i] - actuals[i]);
        abs_sum += err;
        if (actuals[i] == 0.0) {
            e.mape_defined = false;
        } else {
            pct_sum += err / std::abs(actuals[i]);
        }
    }
    const auto n = static_cast<double>(e.n);
    e.mae = abs_sum / n;
    e.mape = e.mape_defined ? 100.0 * pct_sum / n : std::numeric_limits<double>::quiet_NaN();
    return e;
}

double winkler_score(const PredictionInterval& interval, double y, double alpha) {
    const double width = interval.upper - interval.lower;
    if (y < interval.lower) {
        return width + 2.0 / alpha * (interval.lower - y);
    }
    if (y > interval.upper) {
        return width + 2.0 / alpha * (y - interval.upper);
    }
    return width;
}

IntervalEvaluation interval_metrics(std::span<const PredictionInterval> intervals, std::span<const double> actuals,
                                    double alpha) {
    require_same_length(intervals.size(), actuals.size(), "interval_metrics");
    validate_alpha(alpha);
    IntervalEvaluation e;
    e.n = actuals.size();
    std::size_t covered = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < e.n; ++i) {
        if (intervals[i].covers(actuals[i])) {
            ++covered;
        }
        total += winkler_score(intervals[i], actuals[i], alpha);
    }
    e.uc = static_cast<double>(covered) / static_cast<double>(e.n);
    e.winkler = total / static_cast<double>(e.n);
    return e;
}

DmResult dm_test_losses(std::span<const double> loss_a, std::span<const double> loss_b, std::size_t horizon) {
    require_same_length(loss_a.size(), loss_b.size(), "dm_test");
    if (horizon < 1) {
        throw std::invalid_argument("dm_test: horizon must be >= 1");
    }
    const std::size_t n = loss_a.size();
    if (n < kDmMinSamples) {
        throw std::invalid_argument("dm_test needs at least " + std::to_string(kDmMinSamples) + " samples, got " +
                                    std::to_string(n));
    }
    std::vector<double> d(n);
    double mean = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        d[t] = loss_a[t] - loss_b[t];
        mean += d[t];
    }
    const auto nd = static_cast<double>(n);
    mean /= nd;

    auto autocov = [&](std::size_t lag) {
        double s = 0.0;
        for (std::size_t t = lag; t < n; ++t) {
            s += (d[t] - mean) * (d[t - lag] - mean);
        }
        return s / nd;
    };
    double variance = autocov(0);
    for (std::size_t k = 1; k < horizon && k < n; ++k) {
        variance += 2.0 * autocov(k);
    }
    if (variance <= 0.0) {
        variance = autocov(0);
    }

    DmResult r;
    const double scale = std::max(1.0, std::abs(mean));
    if (!(variance > 1e-24 * scale * scale)) {
        r.degenerate = true;
        r.statistic = mean == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), mean);
        r.p_value = mean == 0.0 ? 1.0 : 0.0;
        return r;
    }
    const double h = static_cast<double>(horizon);
    const double hln = std::sqrt((nd + 1.0 - 2.0 * h + h * (h - 1.0) / nd) / nd);
    r.statistic = hln * mean / std::sqrt(variance / nd);
    r.p_value = std::erfc(std::abs(r.statistic) / std::sqrt(2.0));
    return r;
}

DmResult dm_test(std::span<const double> errors_a, std::span<const double> errors_b, Loss loss, std::size_t horizon) {
    require_same_length(errors_a.size(), errors_b.size(), "dm_test");
    std::vector<double> la(errors_a.size());
    std::vector<double> lb(errors_b.size());
    for (std::size_t t = 0; t < la.size(); ++t) {
        if (loss == Loss::Absolute) {
            la[t] = std::abs(errors_a[t]);
            lb[t] = std::abs(errors_b[t]);
        } else {
            la[t] = errors_a[t] * errors_a[t];
            lb[t] = errors_b[t] * errors_b[t];
        }
    }
    return dm_test_losses(la, lb, horizon);
}

} // namespace trajacast
