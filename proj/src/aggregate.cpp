#include "randlen/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace randlen::agg {

namespace {

WeightVector build(std::vector<double> z) {
    if (z.empty()) throw std::invalid_argument("weight vector must be nonempty");
    WeightVector w;
    w.z = std::move(z);
    for (std::size_t i = 0; i < w.z.size(); ++i) {
        const double v = w.z[i];
        if (v == 0.0 || !std::isfinite(v))
            throw std::invalid_argument("weights must be nonzero and finite");
        (v > 0.0 ? w.pos : w.neg).push_back(i);
    }
    return w;
}

}  // namespace

WeightVector WeightVector::positive(std::vector<double> z) {
    WeightVector w = build(std::move(z));
    if (!w.neg.empty())
        throw std::invalid_argument("positive mode requires all weights > 0");
    return w;
}

WeightVector WeightVector::with_signs(std::vector<double> z) {
    WeightVector w = build(std::move(z));
    if (w.pos.empty() || w.neg.empty())
        throw std::invalid_argument(
            "degenerate signed weights: both sign partitions must be nonempty, "
            "otherwise no exceedances of a positive threshold occur");
    return w;
}

namespace {
void check_terms(const WeightVector& w, std::span<const double> row,
                 std::size_t n_terms) {
    if (n_terms == 0) throw std::invalid_argument("aggregate needs at least one term");
    if (n_terms > row.size() || n_terms > w.z.size())
        throw std::invalid_argument("term count exceeds available columns");
}
}  // namespace

double weighted_max(const WeightVector& w, std::span<const double> row,
                    std::size_t n_terms) {
    check_terms(w, row, n_terms);
    double best = w.z[0] * row[0];
    for (std::size_t i = 1; i < n_terms; ++i) best = std::max(best, w.z[i] * row[i]);
    return best;
}

double weighted_sum(const WeightVector& w, std::span<const double> row,
                    std::size_t n_terms) {
    check_terms(w, row, n_terms);
    double s = 0.0;
    for (std::size_t i = 0; i < n_terms; ++i) s += w.z[i] * row[i];
    return s;
}

SignedAggregate signed_aggregates(const WeightVector& w, std::span<const double> row,
                                  std::size_t n_pos, std::size_t n_neg) {
    if (!w.is_signed() || w.pos.empty())
        throw std::invalid_argument("signed aggregates need both sign partitions");
    if (n_pos == 0 || n_pos > w.pos.size() || n_neg == 0 || n_neg > w.neg.size())
        throw std::invalid_argument("per-sign term counts exceed available columns");

    SignedAggregate out;
    out.y_star = -1.0;  // overwritten on first positive term
    double sum_pos = 0.0, sum_neg = 0.0;
    for (std::size_t j = 0; j < n_pos; ++j) {
        const std::size_t i = w.pos[j];
        if (i >= row.size()) throw std::invalid_argument("row too short for positive part");
        const double v = w.z[i] * row[i];
        sum_pos += v;
        out.y_star = j == 0 ? v : std::max(out.y_star, v);
    }
    out.y_star_neg = 0.0;
    for (std::size_t j = 0; j < n_neg; ++j) {
        const std::size_t i = w.neg[j];
        if (i >= row.size()) throw std::invalid_argument("row too short for negative part");
        const double v = w.z[i] * row[i];
        sum_neg += v;
        out.y_star_neg = j == 0 ? v : std::min(out.y_star_neg, v);
    }
    out.y_sum = sum_pos + sum_neg;
    return out;
}

std::vector<double> running_maxima(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("running_maxima needs a nonempty list");
    std::vector<double> out(values.size());
    double best = values[0];
    for (std::size_t i = 0; i < values.size(); ++i) {
        best = std::max(best, values[i]);
        out[i] = best;
    }
    return out;
}

}  // namespace randlen::agg
