#include "trajacast/neighbors.hpp"

#include <algorithm>
#include <queue>
#include <string>

namespace trajacast {
namespace {

template <class ForEachMember>
CandidateSet select_nearest(std::span<const double> values, const TrajectoryView& query, const DistanceKind& kind,
                            std::size_t k, ForEachMember&& for_each_member) {
    if (k < 1) {
        throw std::invalid_argument("k_nearest needs K >= 1");
    }
    if (query.target() > values.size()) {
        throw std::out_of_range("query target " + std::to_string(query.target()) + " beyond series end");
    }
    const auto query_values = window_values(values, query);
    // Top of the heap is the farthest of the current best K.
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(&nearer)> heap(&nearer);
    for_each_member([&](std::size_t start) {
        const TrajectoryView ref{start, query.length, query.step};
        Candidate c{target_value(values, ref), distance(kind, query_values, window_values(values, ref)), start};
        if (heap.size() < k) {
            heap.push(c);
        } else if (nearer(c, heap.top())) {
            heap.pop();
            heap.push(c);
        }
    });
    if (heap.empty()) {
        throw EmptyReferenceError("k_nearest: empty reference set for query " + std::to_string(query.start));
    }
    CandidateSet out;
    out.requested = k;
    out.entries.resize(heap.size());
    for (auto i = out.entries.size(); i-- > 0;) {
        out.entries[i] = heap.top();
        heap.pop();
    }
    return out;
}

} // namespace

std::vector<double> CandidateSet::values() const {
    std::vector<double> v;
    v.reserve(entries.size());
    for (const auto& e : entries) {
        v.push_back(e.target);
    }
    return v;
}

int slot_gap(int a, int b) {
    const int d = std::abs(a - b) % kSlotsPerDay;
    return std::min(d, kSlotsPerDay - d);
}

std::vector<std::size_t> seasonal_filter(const ReferenceSet& reference, int query_slot, int radius,
                                         std::size_t window, std::size_t step, int series_start_slot) {
    if (radius < 0 || radius > kSlotsPerDay / 2) {
        throw std::invalid_argument("seasonal radius must lie in [0, 48]");
    }
    std::vector<std::size_t> kept;
    for (auto i = reference.first; i <= reference.last && !reference.empty(); ++i) {
        if (slot_gap(target_slot(i, window, step, series_start_slot), query_slot) <= radius) {
            kept.push_back(i);
        }
    }
    if (kept.empty()) {
        throw EmptyReferenceError("seasonal filter (R=" + std::to_string(radius) + ") left no reference trajectories");
    }
    return kept;
}

CandidateSet k_nearest(std::span<const double> values, const TrajectoryView& query, const ReferenceSet& reference,
                       const DistanceKind& kind, std::size_t k) {
    return select_nearest(values, query, kind, k, [&](auto&& visit) {
        for (auto i = reference.first; !reference.empty() && i <= reference.last; ++i) {
            visit(i);
        }
    });
}

CandidateSet k_nearest(std::span<const double> values, const TrajectoryView& query,
                       std::span<const std::size_t> members, const DistanceKind& kind, std::size_t k) {
    return select_nearest(values, query, kind, k, [&](auto&& visit) {
        for (auto i : members) {
            visit(i);
        }
    });
}

} // namespace trajacast
