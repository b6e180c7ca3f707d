#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace trajacast {

/// Persistence forecast of x_t made h steps ahead: x_{t-h}. `values[0]` is x_1.
double naive_forecast(std::span<const double> values, std::size_t target, std::size_t step = 1);

/// Mean of x_{t-period·j} over j = 1..depth with period·j >= h and t-period·j >= 1.
double seasonal_naive_forecast(std::span<const double> values, std::size_t target, std::size_t period,
                               std::size_t depth, std::size_t step = 1);

struct ArModel {
    std::vector<double> coefficients; ///< α_1..α_p, α_1 multiplies x_{t-1}
    double intercept = 0.0;
    bool ridge = false;

    std::size_t order() const { return coefficients.size(); }
};

/// OLS fit of x_t on x_{t-1..t-p} (plus an intercept unless disabled) over
/// the window. Needs at least p+2 observations.
ArModel fit_ar(std::span<const double> window, std::size_t order, bool intercept = true);

/// One-step forecast; `recent` holds the last p values in chronological order.
double ar_forecast(const ArModel& model, std::span<const double> recent);

/// h-step forecast by feeding forecasts back h-1 times.
double ar_forecast(const ArModel& model, std::span<const double> recent, std::size_t step);

} // namespace trajacast
