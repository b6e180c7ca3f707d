#pragma once

#include "trajacast/neighbors.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

namespace trajacast {

namespace outlier {
struct None {};
struct Winsorize {};
/// Remove the `low` smallest and `high` largest candidate values.
struct TailConstant {
    std::size_t low = 0;
    std::size_t high = 0;
};
/// Remove floor(low·K) smallest and floor(high·K) largest values.
struct TailPercentile {
    double low = 0.1;
    double high = 0.1;
};
/// Drop values whose |z| under the sample mean/sd exceeds `threshold`.
struct ZScore {
    double threshold = 2.0;
};
} // namespace outlier

using OutlierPolicy =
    std::variant<outlier::None, outlier::Winsorize, outlier::TailConstant, outlier::TailPercentile, outlier::ZScore>;

/// Replaces the single smallest value with the second smallest and the single
/// largest with the second largest. Needs at least 3 candidates.
CandidateSet winsorize(const CandidateSet& candidates);

CandidateSet tail_remove(const CandidateSet& candidates, const outlier::TailConstant& policy);
CandidateSet tail_remove(const CandidateSet& candidates, const outlier::TailPercentile& policy);

/// One pass with the n-1 sample standard deviation; identity when sd == 0.
CandidateSet zscore_remove(const CandidateSet& candidates, double threshold);

CandidateSet apply_outlier_policy(const CandidateSet& candidates, const OutlierPolicy& policy);

/// True when the policy never changes the number of candidates.
bool preserves_size(const OutlierPolicy& policy);

void validate(const OutlierPolicy& policy);

/// `none`, `winsor`, `tailc:<c1>:<c2>`, `tailp:<g1>:<g2>`, `zscore:<tau>`.
OutlierPolicy parse_outlier_policy(std::string_view name);
std::string to_string(const OutlierPolicy& policy);

} // namespace trajacast
