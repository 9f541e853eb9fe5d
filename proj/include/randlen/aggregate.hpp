#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace randlen::agg {

/// Constant weight vector with its sign partition. Positive mode requires
/// every weight > 0; signed mode requires both partitions nonempty. Zero
/// weights are rejected outright.
struct WeightVector {
    std::vector<double> z;
    std::vector<std::size_t> pos;  // indices with z_i > 0, in order
    std::vector<std::size_t> neg;  // indices with z_i < 0, in order

    static WeightVector positive(std::vector<double> z);
    static WeightVector with_signs(std::vector<double> z);

    bool is_signed() const { return !neg.empty(); }
    std::size_t size() const { return z.size(); }
};

/// max(z_1 y_1, ..., z_N y_N) over the first n_terms entries.
double weighted_max(const WeightVector& w, std::span<const double> row,
                    std::size_t n_terms);

/// z_1 y_1 + ... + z_N y_N over the first n_terms entries.
double weighted_sum(const WeightVector& w, std::span<const double> row,
                    std::size_t n_terms);

/// Signed decomposition over a row whose positive-weight terms come first:
///   y_star     = max over the positive part        (>= 0)
///   y_star_neg = most negative value of the negative part (<= 0)
///   y_sum      = positive-part sum + negative-part sum
/// n_pos / n_neg truncate each partition independently.
struct SignedAggregate {
    double y_star = 0.0;
    double y_star_neg = 0.0;
    double y_sum = 0.0;
};

SignedAggregate signed_aggregates(const WeightVector& w, std::span<const double> row,
                                  std::size_t n_pos, std::size_t n_neg);

/// Prefix maxima; last entry is the global maximum.
std::vector<double> running_maxima(std::span<const double> values);

}  // namespace randlen::agg
