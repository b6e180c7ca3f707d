#pragma once

#include "trajacast/dataset.hpp"
#include "trajacast/distances.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace trajacast {

struct Candidate {
    double target = 0.0;    ///< step-h target value of the reference trajectory
    double distance = 0.0;  ///< distance to the query trajectory
    std::size_t source = 0; ///< reference trajectory start index (1-based)

    friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// The K nearest reference trajectories ordered by ascending distance; equal
/// distances put the more recent (larger) source first.
struct CandidateSet {
    std::vector<Candidate> entries;
    std::size_t requested = 0;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    std::vector<double> values() const;
};

/// Strict "nearer than" order used everywhere candidates are ranked.
inline bool nearer(const Candidate& a, const Candidate& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.source > b.source);
}

/// Raised when a seasonal filter or reference set leaves nothing to search.
class EmptyReferenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Slot-of-day of the target of trajectory `start` for window L and step h.
inline int target_slot(std::size_t start, std::size_t window, std::size_t step, int series_start_slot) {
    return static_cast<int>((static_cast<std::size_t>(series_start_slot) + start + window + step - 2) %
                            kSlotsPerDay);
}

/// Circular distance between two slots of the day.
int slot_gap(int a, int b);

/// Members of `reference` whose target slot lies within ±radius slots (mod 96)
/// of `query_slot`. Throws EmptyReferenceError when none survive.
std::vector<std::size_t> seasonal_filter(const ReferenceSet& reference, int query_slot, int radius,
                                         std::size_t window, std::size_t step, int series_start_slot);

/// Exact K-nearest search by bounded max-heap over a linear scan of `reference`.
/// `values[0]` is x_1. Returns min(K, |reference|) entries.
CandidateSet k_nearest(std::span<const double> values, const TrajectoryView& query, const ReferenceSet& reference,
                       const DistanceKind& kind, std::size_t k);

/// Same search over an explicit member list (e.g. a seasonal filter result).
CandidateSet k_nearest(std::span<const double> values, const TrajectoryView& query,
                       std::span<const std::size_t> members, const DistanceKind& kind, std::size_t k);

} // namespace trajacast
