#include "trajacast/distances.hpp"

#include "format.hpp"
#include "overloaded.hpp"
#include "parse_util.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace trajacast {
namespace {

using detail::overloaded;

double coordinate_distance(dist::Coordinate c, double a, double b) {
    const double d = a - b;
    return c == dist::Coordinate::AbsoluteDifference ? std::abs(d) : d * d;
}

double squared_euclidean(std::span<const double> x, std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sum += d * d;
    }
    return sum;
}

} // namespace

void validate(const DistanceKind& kind) {
    std::visit(overloaded{
                   [](const dist::Lp& k) {
                       if (!(k.p >= 1.0) || !std::isfinite(k.p)) {
                           throw std::invalid_argument("lp distance needs p >= 1");
                       }
                   },
                   [](const dist::HeadTail& k) {
                       if (k.head + k.tail == 0) {
                           throw std::invalid_argument("head-tail distance needs l1 + l2 >= 1");
                       }
                   },
                   [](const dist::Lcs& k) {
                       if (!(k.epsilon > 0.0)) {
                           throw std::invalid_argument("lcs distance needs epsilon > 0");
                       }
                   },
                   [](const auto&) {},
               },
               kind);
}

std::size_t lcs_length(std::span<const double> x, std::span<const double> y, double epsilon, std::size_t delta) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("lcs needs epsilon > 0");
    }
    const auto n = x.size();
    const auto m = y.size();
    if (n == 0 || m == 0) {
        return 0;
    }
    // table[k][j] = LC(x[1:k], y[1:j]); two rolling rows.
    std::vector<std::size_t> prev(m + 1, 0), cur(m + 1, 0);
    for (std::size_t k = 1; k <= n; ++k) {
        cur[0] = 0;
        for (std::size_t j = 1; j <= m; ++j) {
            const auto gap = k > j ? k - j : j - k;
            if (std::abs(x[k - 1] - y[j - 1]) < epsilon && gap <= delta) {
                cur[j] = prev[j - 1] + 1;
            } else {
                cur[j] = std::max(prev[j], cur[j - 1]);
            }
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double distance(const DistanceKind& kind, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("distance between vectors of length " + std::to_string(x.size()) + " and " +
                                    std::to_string(y.size()));
    }
    const auto L = x.size();
    return std::visit(
        overloaded{
            [&](const dist::Lp& k) {
                if (!(k.p >= 1.0)) {
                    throw std::invalid_argument("lp distance needs p >= 1");
                }
                double sum = 0.0;
                for (std::size_t i = 0; i < L; ++i) {
                    sum += std::pow(std::abs(x[i] - y[i]), k.p);
                }
                return std::pow(sum, 1.0 / k.p);
            },
            [&](const dist::Euclidean&) { return std::sqrt(squared_euclidean(x, y)); },
            [&](const dist::Manhattan&) {
                double sum = 0.0;
                for (std::size_t i = 0; i < L; ++i) {
                    sum += std::abs(x[i] - y[i]);
                }
                return sum;
            },
            [&](const dist::WeightedEuclidean&) {
                double sum = 0.0;
                for (std::size_t i = 0; i < L; ++i) {
                    const double d = x[i] - y[i];
                    sum += static_cast<double>(i + 1) * d * d;
                }
                return std::sqrt(sum / (static_cast<double>(L) * static_cast<double>(L + 1) / 2.0));
            },
            [&](const dist::Sup&) {
                double m = 0.0;
                for (std::size_t i = 0; i < L; ++i) {
                    m = std::max(m, std::abs(x[i] - y[i]));
                }
                return m;
            },
            [&](const dist::HeadTail& k) {
                if (k.head + k.tail > L - 1 || L == 0) {
                    throw std::invalid_argument("head-tail distance needs l1 + l2 <= L - 1 (L=" + std::to_string(L) +
                                                ")");
                }
                double sum = 0.0;
                for (std::size_t i = 0; i < k.head; ++i) {
                    sum += coordinate_distance(k.head_coordinate, x[i], y[i]);
                }
                for (std::size_t i = L - k.tail; i < L; ++i) {
                    sum += coordinate_distance(k.tail_coordinate, x[i], y[i]);
                }
                return sum;
            },
            [&](const dist::Cosine&) {
                double dot = 0.0, nx = 0.0, ny = 0.0;
                for (std::size_t i = 0; i < L; ++i) {
                    dot += x[i] * y[i];
                    nx += x[i] * x[i];
                    ny += y[i] * y[i];
                }
                if (nx == 0.0 || ny == 0.0) {
                    throw std::invalid_argument("cosine distance of a zero-norm vector");
                }
                return std::clamp(1.0 - dot / (std::sqrt(nx) * std::sqrt(ny)), 0.0, 2.0);
            },
            [&](const dist::Pearson&) {
                double mx = 0.0, my = 0.0;
                for (std::size_t i = 0; i < L; ++i) {
                    mx += x[i];
                    my += y[i];
                }
                mx /= static_cast<double>(L);
                my /= static_cast<double>(L);
                double cov = 0.0, vx = 0.0, vy = 0.0;
                for (std::size_t i = 0; i < L; ++i) {
                    const double dx = x[i] - mx;
                    const double dy = y[i] - my;
                    cov += dx * dy;
                    vx += dx * dx;
                    vy += dy * dy;
                }
                if (vx == 0.0 || vy == 0.0) {
                    throw std::invalid_argument("pearson distance of a zero-variance vector");
                }
                return std::clamp(1.0 - cov / (std::sqrt(vx) * std::sqrt(vy)), 0.0, 2.0);
            },
            [&](const dist::Canberra&) {
                double sum = 0.0;
                for (std::size_t i = 0; i < L; ++i) {
                    const double den = std::abs(x[i]) + std::abs(y[i]);
                    if (den > 0.0) {
                        sum += std::abs(x[i] - y[i]) / den;
                    }
                }
                return sum;
            },
            [&](const dist::Lcs& k) {
                return static_cast<double>(L - lcs_length(x, y, k.epsilon, k.delta));
            },
        },
        kind);
}

DistanceKind parse_distance(std::string_view name) {
    const auto parts = detail::split(name, ':');
    const auto& head = parts.front();
    auto arity = [&](std::size_t lo, std::size_t hi) {
        if (parts.size() - 1 < lo || parts.size() - 1 > hi) {
            throw std::invalid_argument("malformed distance '" + std::string(name) + "'");
        }
    };
    DistanceKind kind;
    if (head == "euclidean") {
        arity(0, 0);
        kind = dist::Euclidean{};
    } else if (head == "weuclidean") {
        arity(0, 0);
        kind = dist::WeightedEuclidean{};
    } else if (head == "manhattan") {
        arity(0, 0);
        kind = dist::Manhattan{};
    } else if (head == "lp") {
        arity(1, 1);
        kind = dist::Lp{detail::parse_number(parts[1], name)};
    } else if (head == "sup") {
        arity(0, 0);
        kind = dist::Sup{};
    } else if (head == "headtail") {
        arity(2, 3);
        dist::HeadTail ht{detail::parse_count(parts[1], name), detail::parse_count(parts[2], name)};
        if (parts.size() == 4) {
            if (parts[3] == "sq") {
                ht.head_coordinate = ht.tail_coordinate = dist::Coordinate::SquaredDifference;
            } else if (parts[3] != "abs") {
                throw std::invalid_argument("malformed distance '" + std::string(name) + "'");
            }
        }
        kind = ht;
    } else if (head == "cosine") {
        arity(0, 0);
        kind = dist::Cosine{};
    } else if (head == "pearson") {
        arity(0, 0);
        kind = dist::Pearson{};
    } else if (head == "canberra") {
        arity(0, 0);
        kind = dist::Canberra{};
    } else if (head == "lcs") {
        arity(2, 2);
        kind = dist::Lcs{detail::parse_number(parts[1], name), detail::parse_count(parts[2], name)};
    } else {
        throw std::invalid_argument("unknown distance '" + std::string(name) + "'");
    }
    validate(kind);
    return kind;
}

std::string to_string(const DistanceKind& kind) {
    return std::visit(overloaded{
                          [](const dist::Lp& k) { return "lp:" + detail::format_double(k.p); },
                          [](const dist::Euclidean&) { return std::string("euclidean"); },
                          [](const dist::Manhattan&) { return std::string("manhattan"); },
                          [](const dist::WeightedEuclidean&) { return std::string("weuclidean"); },
                          [](const dist::Sup&) { return std::string("sup"); },
                          [](const dist::HeadTail& k) {
                              std::string s = "headtail:" + std::to_string(k.head) + ":" + std::to_string(k.tail);
                              if (k.head_coordinate == dist::Coordinate::SquaredDifference) {
                                  s += ":sq";
                              }
                              return s;
                          },
                          [](const dist::Cosine&) { return std::string("cosine"); },
                          [](const dist::Pearson&) { return std::string("pearson"); },
                          [](const dist::Canberra&) { return std::string("canberra"); },
                          [](const dist::Lcs& k) {
                              return "lcs:" + detail::format_double(k.epsilon) + ":" + std::to_string(k.delta);
                          },
                      },
                      kind);
}

bool is_metric(const DistanceKind& kind) {
    return std::holds_alternative<dist::Lp>(kind) || std::holds_alternative<dist::Euclidean>(kind) ||
           std::holds_alternative<dist::Manhattan>(kind) || std::holds_alternative<dist::WeightedEuclidean>(kind) ||
           std::holds_alternative<dist::Sup>(kind) || std::holds_alternative<dist::Canberra>(kind);
}

} // namespace trajacast
