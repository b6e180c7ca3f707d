#pragma once

#include "trajacast/intervals.hpp"

#include <cstddef>
#include <span>

namespace trajacast {

struct PointEvaluation {
    double mae = 0.0;
    double mape = 0.0;         ///< percent; NaN when undefined
    bool mape_defined = true;  ///< false when some actual is zero
    std::size_t n = 0;
};

PointEvaluation point_metrics(std::span<const double> forecasts, std::span<const double> actuals);

struct IntervalEvaluation {
    double uc = 0.0;
    double winkler = 0.0; ///< mean Winkler score
    std::size_t n = 0;
};

/// Winkler score: width, plus (2/α)·(distance to the violated bound) when y
/// falls outside the closed interval.
double winkler_score(const PredictionInterval& interval, double y, double alpha);

IntervalEvaluation interval_metrics(std::span<const PredictionInterval> intervals, std::span<const double> actuals,
                                    double alpha);

enum class Loss { Absolute, Squared };

struct DmResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool degenerate = false; ///< the loss differential has zero variance
};

/// Minimum sample size accepted by dm_test.
inline constexpr std::size_t kDmMinSamples = 30;

/// Diebold-Mariano test on errors A and B with the Harvey-Leybourne-Newbold
/// correction. Positive statistics mean A has the larger loss.
DmResult dm_test(std::span<const double> errors_a, std::span<const double> errors_b, Loss loss, std::size_t horizon);

/// Same test on precomputed per-time losses (e.g. Winkler scores).
DmResult dm_test_losses(std::span<const double> loss_a, std::span<const double> loss_b, std::size_t horizon);

} // namespace trajacast
