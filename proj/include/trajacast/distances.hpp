#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace trajacast {

namespace dist {

struct Lp {
    double p = 2.0;
};
struct Euclidean {};
struct Manhattan {};
/// Recency-weighted Euclidean: w_i = i / (L(L+1)/2), coordinate 1 the oldest.
struct WeightedEuclidean {};
struct Sup {};

/// Per-coordinate distance underlying the head-tail sum.
enum class Coordinate { AbsoluteDifference, SquaredDifference };

/// Sum of per-coordinate distances over the first `head` and last `tail` coordinates.
struct HeadTail {
    std::size_t head = 1;
    std::size_t tail = 1;
    Coordinate head_coordinate = Coordinate::AbsoluteDifference;
    Coordinate tail_coordinate = Coordinate::AbsoluteDifference;
};
struct Cosine {};
struct Pearson {};
/// 0/0 coordinates contribute 0.
struct Canberra {};
/// Reported as L - LC(x, y) so that smaller means more similar.
struct Lcs {
    double epsilon = 1.0;
    std::size_t delta = 0;
};

} // namespace dist

using DistanceKind = std::variant<dist::Lp, dist::Euclidean, dist::Manhattan, dist::WeightedEuclidean, dist::Sup,
                                  dist::HeadTail, dist::Cosine, dist::Pearson, dist::Canberra, dist::Lcs>;

/// Throws std::invalid_argument on length mismatch, invalid parameters,
/// a zero-norm vector (Cosine) or a zero-variance vector (Pearson).
double distance(const DistanceKind& kind, std::span<const double> x, std::span<const double> y);

/// Longest common subsequence length under match tolerance `epsilon` and
/// index tolerance `delta`, computed bottom-up in O(|x||y|).
std::size_t lcs_length(std::span<const double> x, std::span<const double> y, double epsilon, std::size_t delta);

/// Weight of 1-based coordinate i in a window of length L.
inline double recency_weight(std::size_t i, std::size_t length) {
    return static_cast<double>(i) / (static_cast<double>(length) * static_cast<double>(length + 1) / 2.0);
}

/// Validates parameters that do not depend on the window length.
void validate(const DistanceKind& kind);

/// Parses `euclidean`, `weuclidean`, `manhattan`, `lp:<p>`, `sup`,
/// `headtail:<l1>:<l2>[:abs|sq]`, `cosine`, `pearson`, `canberra`, `lcs:<eps>:<delta>`.
DistanceKind parse_distance(std::string_view name);
std::string to_string(const DistanceKind& kind);

/// True for kinds expected to satisfy the triangle inequality.
bool is_metric(const DistanceKind& kind);

} // namespace trajacast
