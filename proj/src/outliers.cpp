#include "trajacast/outliers.hpp"

#include "format.hpp"
#include "overloaded.hpp"
#include "parse_util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace trajacast {
namespace {

using detail::overloaded;

// Positions of `entries` sorted by (value, distance order); a canonical view
// independent of how the input happened to be ordered.
std::vector<std::size_t> value_order(const std::vector<Candidate>& entries) {
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = entries[a];
        const auto& y = entries[b];
        if (x.target != y.target) {
            return x.target < y.target;
        }
        return nearer(x, y);
    });
    return order;
}

CandidateSet canonical(CandidateSet set) {
    std::sort(set.entries.begin(), set.entries.end(), nearer);
    return set;
}

CandidateSet drop_tails(const CandidateSet& candidates, std::size_t low, std::size_t high) {
    const auto n = candidates.size();
    if (low + high >= n) {
        throw std::invalid_argument("tail removal of " + std::to_string(low) + "+" + std::to_string(high) +
                                    " would empty a set of " + std::to_string(n) + " candidates");
    }
    const auto order = value_order(candidates.entries);
    CandidateSet out;
    out.requested = candidates.requested;
    for (std::size_t r = low; r < n - high; ++r) {
        out.entries.push_back(candidates.entries[order[r]]);
    }
    return canonical(std::move(out));
}

std::size_t tail_count(double fraction, std::size_t k) {
    // Small slack so that e.g. 0.29 * 100 counts as 29 despite rounding.
    return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(k) + 1e-9));
}

} // namespace

CandidateSet winsorize(const CandidateSet& candidates) {
    if (candidates.size() < 3) {
        throw std::invalid_argument("winsorization needs at least 3 candidates");
    }
    const auto order = value_order(candidates.entries);
    CandidateSet out = candidates;
    const auto n = order.size();
    out.entries[order.front()].target = candidates.entries[order[1]].target;
    out.entries[order.back()].target = candidates.entries[order[n - 2]].target;
    return canonical(std::move(out));
}

CandidateSet tail_remove(const CandidateSet& candidates, const outlier::TailConstant& policy) {
    return drop_tails(candidates, policy.low, policy.high);
}

CandidateSet tail_remove(const CandidateSet& candidates, const outlier::TailPercentile& policy) {
    validate(OutlierPolicy{policy});
    const auto k = candidates.size();
    return drop_tails(candidates, tail_count(policy.low, k), tail_count(policy.high, k));
}

CandidateSet zscore_remove(const CandidateSet& candidates, double threshold) {
    if (!(threshold > 0.0)) {
        throw std::invalid_argument("z-score threshold must be positive");
    }
    const auto n = candidates.size();
    if (n < 3) {
        throw std::invalid_argument("z-score removal needs at least 3 candidates");
    }
    double mean = 0.0;
    for (const auto& e : candidates.entries) {
        mean += e.target;
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const auto& e : candidates.entries) {
        ss += (e.target - mean) * (e.target - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) {
        return canonical(candidates);
    }
    CandidateSet out;
    out.requested = candidates.requested;
    for (const auto& e : candidates.entries) {
        if (std::abs(e.target - mean) / sd <= threshold) {
            out.entries.push_back(e);
        }
    }
    if (out.empty()) {
        throw std::invalid_argument("z-score removal would empty the candidate set");
    }
    return canonical(std::move(out));
}

CandidateSet apply_outlier_policy(const CandidateSet& candidates, const OutlierPolicy& policy) {
    return std::visit(overloaded{
                          [&](const outlier::None&) { return candidates; },
                          [&](const outlier::Winsorize&) { return winsorize(candidates); },
                          [&](const outlier::TailConstant& p) { return tail_remove(candidates, p); },
                          [&](const outlier::TailPercentile& p) { return tail_remove(candidates, p); },
                          [&](const outlier::ZScore& p) { return zscore_remove(candidates, p.threshold); },
                      },
                      policy);
}

bool preserves_size(const OutlierPolicy& policy) {
    return std::holds_alternative<outlier::None>(policy) || std::holds_alternative<outlier::Winsorize>(policy);
}

void validate(const OutlierPolicy& policy) {
    if (const auto* p = std::get_if<outlier::TailPercentile>(&policy)) {
        if (!(p->low >= 0.0) || !(p->high >= 0.0) || !(p->low + p->high < 1.0)) {
            throw std::invalid_argument("percentile tail removal needs g1, g2 >= 0 and g1 + g2 < 1");
        }
    }
    if (const auto* p = std::get_if<outlier::ZScore>(&policy)) {
        if (!(p->threshold > 0.0)) {
            throw std::invalid_argument("z-score threshold must be positive");
        }
    }
}

OutlierPolicy parse_outlier_policy(std::string_view name) {
    const auto parts = detail::split(name, ':');
    const auto& head = parts.front();
    auto arity = [&](std::size_t n) {
        if (parts.size() - 1 != n) {
            throw std::invalid_argument("malformed outlier policy '" + std::string(name) + "'");
        }
    };
    OutlierPolicy policy;
    if (head == "none") {
        arity(0);
        policy = outlier::None{};
    } else if (head == "winsor") {
        arity(0);
        policy = outlier::Winsorize{};
    } else if (head == "tailc") {
        arity(2);
        policy = outlier::TailConstant{detail::parse_count(parts[1], name), detail::parse_count(parts[2], name)};
    } else if (head == "tailp") {
        arity(2);
        policy = outlier::TailPercentile{detail::parse_number(parts[1], name), detail::parse_number(parts[2], name)};
    } else if (head == "zscore") {
        arity(1);
        policy = outlier::ZScore{detail::parse_number(parts[1], name)};
    } else {
        throw std::invalid_argument("unknown outlier policy '" + std::string(name) + "'");
    }
    validate(policy);
    return policy;
}

std::string to_string(const OutlierPolicy& policy) {
    return std::visit(overloaded{
                          [](const outlier::None&) { return std::string("none"); },
                          [](const outlier::Winsorize&) { return std::string("winsor"); },
                          [](const outlier::TailConstant& p) {
                              return "tailc:" + std::to_string(p.low) + ":" + std::to_string(p.high);
                          },
                          [](const outlier::TailPercentile& p) {
                              return "tailp:" + detail::format_double(p.low) + ":" + detail::format_double(p.high);
                          },
                          [](const outlier::ZScore& p) { return "zscore:" + detail::format_double(p.threshold); },
                      },
                      policy);
}

} // namespace trajacast
