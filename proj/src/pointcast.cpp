#include "trajacast/pointcast.hpp"

#include "trajacast/least_squares.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace trajacast {
namespace {

void require_non_empty(const CandidateSet& candidates) {
    if (candidates.empty()) {
        throw std::invalid_argument("point forecast from an empty candidate set");
    }
}

} // namespace

double evaluate(RankFunction f, double x) {
    switch (f) {
    case RankFunction::F1:
        return 1.0;
    case RankFunction::F2:
        return x;
    case RankFunction::F3:
        return std::sqrt(x);
    case RankFunction::F4:
        return std::log1p(x);
    case RankFunction::F5: {
        const double l = std::log1p(x);
        return l * l;
    }
    }
    throw std::invalid_argument("unknown rank function");
}

double evaluate(DistanceFunction g, double x) {
    switch (g) {
    case DistanceFunction::G1:
        return 1.0 / (x + 0.01);
    case DistanceFunction::G2:
        return 1.0 / (std::sqrt(x) + 0.01);
    case DistanceFunction::G3:
        return 1.0 / (x * std::sqrt(x) + 0.01);
    case DistanceFunction::G4:
        return 1.0 / (x * x + 0.01);
    }
    throw std::invalid_argument("unknown distance function");
}

std::vector<double> rank_weights(RankFunction f, std::size_t k) {
    double total = 0.0;
    for (std::size_t x = 1; x <= k; ++x) {
        total += evaluate(f, static_cast<double>(x));
    }
    std::vector<double> w(k);
    for (std::size_t s = 1; s <= k; ++s) {
        w[s - 1] = evaluate(f, static_cast<double>(k - s + 1)) / total;
    }
    return w;
}

std::vector<double> distance_weights(DistanceFunction g, std::span<const double> distances) {
    std::vector<double> w(distances.size());
    double total = 0.0;
    for (std::size_t s = 0; s < distances.size(); ++s) {
        if (!(distances[s] >= 0.0)) {
            throw std::invalid_argument("distance weights need non-negative distances");
        }
        w[s] = evaluate(g, distances[s]);
        total += w[s];
    }
    for (auto& v : w) {
        v /= total;
    }
    return w;
}

double forecast_mean(const CandidateSet& candidates) {
    require_non_empty(candidates);
    // Averaging offsets from the first value keeps identical candidates exact.
    const double base = candidates.entries.front().target;
    double sum = 0.0;
    for (const auto& e : candidates.entries) {
        sum += e.target - base;
    }
    return base + sum / static_cast<double>(candidates.size());
}

double forecast_rank_weighted(const CandidateSet& candidates, RankFunction f) {
    require_non_empty(candidates);
    // Same offset form as forecast_mean, so f1 stays bit-identical to it.
    const auto k = candidates.size();
    const double base = candidates.entries.front().target;
    double total = 0.0;
    for (std::size_t x = 1; x <= k; ++x) {
        total += evaluate(f, static_cast<double>(x));
    }
    double sum = 0.0;
    for (std::size_t s = 1; s <= k; ++s) {
        sum += evaluate(f, static_cast<double>(k - s + 1)) * (candidates.entries[s - 1].target - base);
    }
    return base + sum / total;
}

double forecast_distance_weighted(const CandidateSet& candidates, DistanceFunction g) {
    require_non_empty(candidates);
    const double base = candidates.entries.front().target;
    double num = 0.0;
    double den = 0.0;
    for (const auto& e : candidates.entries) {
        if (!(e.distance >= 0.0)) {
            throw std::invalid_argument("distance weights need non-negative distances");
        }
        const double w = evaluate(g, e.distance);
        num += w * (e.target - base);
        den += w;
    }
    return base + num / den;
}

GlobalWeights fit_global_weights(std::span<const TuneExample> examples, std::size_t k) {
    if (k < 1) {
        throw std::invalid_argument("global weights need K >= 1");
    }
    if (examples.size() < k + 2) {
        throw std::invalid_argument("global weights need at least K+2=" + std::to_string(k + 2) +
                                    " tune queries, got " + std::to_string(examples.size()));
    }
    Eigen::MatrixXd design(static_cast<Eigen::Index>(examples.size()), static_cast<Eigen::Index>(k + 1));
    Eigen::VectorXd y(static_cast<Eigen::Index>(examples.size()));
    for (std::size_t q = 0; q < examples.size(); ++q) {
        const auto& c = examples[q].candidates;
        if (c.size() != k) {
            throw std::invalid_argument("tune query " + std::to_string(q) + " has " + std::to_string(c.size()) +
                                        " candidates, expected " + std::to_string(k));
        }
        const auto row = static_cast<Eigen::Index>(q);
        for (std::size_t s = 0; s < k; ++s) {
            design(row, static_cast<Eigen::Index>(s)) = c.entries[s].target;
        }
        design(row, static_cast<Eigen::Index>(k)) = 1.0;
        y(row) = examples[q].actual;
    }
    const auto fit = solve_least_squares(design, y);
    GlobalWeights w;
    w.weights.assign(fit.coefficients.data(), fit.coefficients.data() + k);
    w.intercept = fit.coefficients(static_cast<Eigen::Index>(k));
    w.ridge = fit.ridge;
    return w;
}

double forecast_global(const CandidateSet& candidates, const GlobalWeights& weights) {
    if (candidates.size() != weights.k()) {
        throw std::invalid_argument("global weights expect " + std::to_string(weights.k()) + " candidates, got " +
                                    std::to_string(candidates.size()));
    }
    double sum = weights.intercept;
    for (std::size_t s = 0; s < weights.k(); ++s) {
        sum += weights.weights[s] * candidates.entries[s].target;
    }
    return sum;
}

LocalRegressionForecast forecast_local_regression(std::span<const double> values, const TrajectoryView& query,
                                                  const CandidateSet& candidates) {
    require_non_empty(candidates);
    const auto L = query.length;
    const auto n = static_cast<Eigen::Index>(candidates.size());
    Eigen::MatrixXd design(n, static_cast<Eigen::Index>(L + 1));
    Eigen::VectorXd y(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& c = candidates.entries[static_cast<std::size_t>(r)];
        const auto coords = window_values(values, TrajectoryView{c.source, L, query.step});
        for (std::size_t t = 0; t < L; ++t) {
            design(r, static_cast<Eigen::Index>(t)) = coords[t];
        }
        design(r, static_cast<Eigen::Index>(L)) = 1.0;
        y(r) = c.target;
    }
    const auto fit = solve_least_squares(design, y);
    const auto q = window_values(values, query);
    double pred = fit.coefficients(static_cast<Eigen::Index>(L));
    for (std::size_t t = 0; t < L; ++t) {
        pred += fit.coefficients(static_cast<Eigen::Index>(t)) * q[t];
    }
    if (!std::isfinite(pred)) {
        throw std::runtime_error("local regression produced a non-finite forecast");
    }
    return {pred, fit.ridge || candidates.size() < L + 2};
}

} // namespace trajacast
