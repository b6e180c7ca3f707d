#pragma once

#include "trajacast/distances.hpp"
#include "trajacast/neighbors.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace trajacast {

struct PredictionInterval {
    double lower = 0.0;
    double upper = 0.0;
    double alpha = 0.05; ///< nominal level is 1 - alpha

    double width() const { return upper - lower; }
    bool covers(double y) const { return lower <= y && y <= upper; }
};

void validate_alpha(double alpha);

/// Sample quantile a_{q(N+1)} with linear interpolation between order
/// statistics; indices are clamped to [1, N].
double sample_quantile(std::span<const double> sample, double q);

/// Same as sample_quantile for an already ascending sample.
double sorted_quantile(std::span<const double> sorted, double q);

/// Model errors e_i = F_i - X_i for the contiguous series indices
/// [first_index, first_index + errors.size() - 1].
struct ErrorSeries {
    std::size_t first_index = 1;
    std::vector<double> errors;

    std::size_t last_index() const { return first_index + errors.size() - 1; }
    bool contains(std::size_t i) const { return !errors.empty() && i >= first_index && i <= last_index(); }
    double at(std::size_t i) const { return errors[i - first_index]; }
};

/// Quantiles α/2 and 1-α/2 of the candidate target values.
PredictionInterval st_interval(const CandidateSet& candidates, double alpha);

/// Interval from an error sample with e = F - X: since X = F - e, the bounds
/// are F - e(1-α/2) and F - e(α/2).
PredictionInterval error_interval(double forecast, std::span<const double> errors, double alpha);

/// Errors visible when forecasting target t at step h: the `length` most
/// recent errors at indices <= t-h, or with `seasonal` the errors at t-96j for
/// the `length` most recent days j with t-96j <= t-h. Returns fewer than
/// `length` values when history is short.
std::vector<double> hs_window(const ErrorSeries& errors, std::size_t target, std::size_t step, std::size_t length,
                              bool seasonal);

/// Historical simulation interval; throws std::invalid_argument when fewer
/// than two errors are available.
PredictionInterval hs_interval(double forecast, const ErrorSeries& errors, std::size_t target, std::size_t step,
                               std::size_t length, double alpha, bool seasonal);

struct MdstConfig {
    std::size_t window = 8;
    std::size_t neighbors = 220;
    DistanceKind distance = dist::WeightedEuclidean{};
    std::optional<int> radius; ///< seasonal filter on error trajectories
};

/// Candidate next-errors of the K error trajectories most similar to the one
/// ending at t-h; `series_start_slot` is the slot of series index 1.
CandidateSet mdst_candidates(const ErrorSeries& errors, std::size_t target, std::size_t step,
                             const MdstConfig& config, int series_start_slot);

PredictionInterval mdst_interval(double forecast, const ErrorSeries& errors, std::size_t target, std::size_t step,
                                 const MdstConfig& config, double alpha, int series_start_slot);

} // namespace trajacast
