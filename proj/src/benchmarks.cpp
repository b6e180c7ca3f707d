#include "trajacast/benchmarks.hpp"

#include "trajacast/least_squares.hpp"

#include <stdexcept>
#include <string>

namespace trajacast {

double naive_forecast(std::span<const double> values, std::size_t target, std::size_t step) {
    if (step < 1 || target <= step || target - step > values.size()) {
        throw std::invalid_argument("naive forecast: no observation " + std::to_string(step) +
                                    " step(s) before index " + std::to_string(target));
    }
    return values[target - step - 1];
}

double seasonal_naive_forecast(std::span<const double> values, std::size_t target, std::size_t period,
                               std::size_t depth, std::size_t step) {
    if (period < 1 || depth < 1) {
        throw std::invalid_argument("seasonal naive needs period >= 1 and depth >= 1");
    }
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t j = 1; j <= depth; ++j) {
        const std::size_t lag = period * j;
        if (lag < step) {
            continue;
        }
        if (lag >= target) {
            break;
        }
        const std::size_t i = target - lag;
        if (i > values.size()) {
            continue;
        }
        sum += values[i - 1];
        ++used;
    }
    if (used == 0) {
        throw std::invalid_argument("seasonal naive: no history one period before index " + std::to_string(target));
    }
    return sum / static_cast<double>(used);
}

ArModel fit_ar(std::span<const double> window, std::size_t order, bool intercept) {
    if (order < 1) {
        throw std::invalid_argument("AR order must be >= 1");
    }
    if (window.size() < order + 2) {
        throw std::invalid_argument("AR(" + std::to_string(order) + ") needs at least " + std::to_string(order + 2) +
                                    " observations, got " + std::to_string(window.size()));
    }
    const auto rows = static_cast<Eigen::Index>(window.size() - order);
    const auto cols = static_cast<Eigen::Index>(order + (intercept ? 1 : 0));
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd y(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto t = static_cast<std::size_t>(r) + order;
        for (std::size_t i = 1; i <= order; ++i) {
            design(r, static_cast<Eigen::Index>(i - 1)) = window[t - i];
        }
        if (intercept) {
            design(r, cols - 1) = 1.0;
        }
        y(r) = window[t];
    }
    const auto fit = solve_least_squares(design, y);
    ArModel model;
    model.coefficients.assign(fit.coefficients.data(), fit.coefficients.data() + order);
    model.intercept = intercept ? fit.coefficients(cols - 1) : 0.0;
    model.ridge = fit.ridge;
    return model;
}

double ar_forecast(const ArModel& model, std::span<const double> recent) {
    if (recent.size() != model.order()) {
        throw std::invalid_argument("AR(" + std::to_string(model.order()) + ") forecast needs exactly " +
                                    std::to_string(model.order()) + " recent values, got " +
                                    std::to_string(recent.size()));
    }
    double f = model.intercept;
    for (std::size_t i = 1; i <= model.order(); ++i) {
        f += model.coefficients[i - 1] * recent[recent.size() - i];
    }
    return f;
}

double ar_forecast(const ArModel& model, std::span<const double> recent, std::size_t step) {
    if (step < 1) {
        throw std::invalid_argument("AR forecast step must be >= 1");
    }
    if (recent.size() != model.order()) {
        return ar_forecast(model, recent);
    }
    std::vector<double> buffer(recent.begin(), recent.end());
    double f = 0.0;
    for (std::size_t s = 0; s < step; ++s) {
        f = ar_forecast(model, std::span<const double>(buffer).last(model.order()));
        buffer.push_back(f);
    }
    return f;
}

} // namespace trajacast
