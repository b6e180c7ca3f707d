#pragma once

#include "trajacast/dataset.hpp"
#include "trajacast/neighbors.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace trajacast {

/// Non-decreasing rank functions: f1=1, f2=x, f3=√x, f4=ln(1+x), f5=ln²(1+x).
enum class RankFunction { F1 = 1, F2, F3, F4, F5 };

/// Positive decreasing distance functions: g1=1/(x+0.01), g2=1/(√x+0.01),
/// g3=1/(x√x+0.01), g4=1/(x²+0.01).
enum class DistanceFunction { G1 = 1, G2, G3, G4 };

double evaluate(RankFunction f, double x);
double evaluate(DistanceFunction g, double x);

/// w_s = f(K-s+1) / Σ_{x=1..K} f(x), s = 1 the nearest.
std::vector<double> rank_weights(RankFunction f, std::size_t k);

/// w_s = g(d_s) / Σ g(d_s).
std::vector<double> distance_weights(DistanceFunction g, std::span<const double> distances);

double forecast_mean(const CandidateSet& candidates);

/// Model-1: rank-weighted mean, candidates nearest first.
double forecast_rank_weighted(const CandidateSet& candidates, RankFunction f);

/// Model-2: distance-weighted mean.
double forecast_distance_weighted(const CandidateSet& candidates, DistanceFunction g);

/// Model-3 weights: slot s multiplies the s-th nearest candidate's value.
struct GlobalWeights {
    std::vector<double> weights;
    double intercept = 0.0;
    bool ridge = false;

    std::size_t k() const { return weights.size(); }
};

struct TuneExample {
    CandidateSet candidates;
    double actual = 0.0;
};

/// Least-squares fit of actual ≈ Σ w_s·value_s + w_{K+1} over the tune
/// examples. Every example must hold exactly K candidates; needs >= K+2 examples.
GlobalWeights fit_global_weights(std::span<const TuneExample> examples, std::size_t k);

double forecast_global(const CandidateSet& candidates, const GlobalWeights& weights);

struct LocalRegressionForecast {
    double value = 0.0;
    bool ridge = false; ///< fewer than L+2 candidates or a singular design
};

/// OLS of the candidates' targets on their L trajectory coordinates plus an
/// intercept, evaluated at the query trajectory. `values[0]` is x_1.
LocalRegressionForecast forecast_local_regression(std::span<const double> values, const TrajectoryView& query,
                                                  const CandidateSet& candidates);

} // namespace trajacast
