#include "randlen/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace randlen::est {

std::size_t default_k_order(std::size_t n) {
    if (n < 2) return 1;
    const auto k = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 0.6)));
    return std::max<std::size_t>(1, std::min(k, n / 10));
}

EstimateReport hill(std::span<const double> sample, std::size_t k_order) {
    const std::size_t n = sample.size();
    if (k_order < 1 || k_order >= n)
        throw std::invalid_argument("hill needs 1 <= k_order < sample size");
    for (double v : sample)
        if (!(v > 0.0)) throw std::invalid_argument("hill needs strictly positive values");

    // Top k_order + 1 order statistics, descending.
    std::vector<double> top(sample.begin(), sample.end());
    std::partial_sort(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k_order) + 1,
                      top.end(), std::greater<>());
    const double pivot = top[k_order];  // X_(n - k_order)

    double mean_log_excess = 0.0;
    for (std::size_t i = 0; i < k_order; ++i) mean_log_excess += std::log(top[i] / pivot);
    mean_log_excess /= static_cast<double>(k_order);
    if (mean_log_excess == 0.0)
        throw std::domain_error("degenerate sample: zero log-spread above the pivot");

    EstimateReport r;
    r.method = "hill";
    r.point = 1.0 / mean_log_excess;
    r.stderr_ = r.point / std::sqrt(static_cast<double>(k_order));
    r.tuning["k_order"] = static_cast<double>(k_order);
    r.tuning["pivot"] = pivot;
    r.sample_size = n;
    return r;
}

ThetaEstimate definition_theta(double prob_max_below, double tau_hat) {
    if (!(prob_max_below >= 0.0 && prob_max_below <= 1.0))
        throw std::invalid_argument("definition_theta needs a probability");
    if (prob_max_below == 0.0 || prob_max_below == 1.0)
        throw std::domain_error("degenerate: increase replications or adjust y");
    if (!(tau_hat > 0.0)) throw std::invalid_argument("definition_theta needs tau > 0");

    ThetaEstimate t;
    const double raw = -std::log(prob_max_below) / tau_hat;
    t.value = std::clamp(raw, 0.0, 1.0);
    t.clipped = raw != t.value;
    return t;
}

double estimate_tau(const std::vector<std::vector<double>>& paths, double u) {
    if (paths.empty() || paths.front().empty())
        throw std::invalid_argument("estimate_tau needs nonempty paths");
    if (!(u > 0.0)) throw std::invalid_argument("estimate_tau needs u > 0");
    const std::size_t n = paths.front().size();
    std::size_t exceed = 0, total = 0;
    for (const auto& p : paths) {
        if (p.size() != n) throw std::invalid_argument("estimate_tau paths must share a length");
        for (double v : p) exceed += v > u;
        total += n;
    }
    if (exceed == 0) throw std::domain_error("estimate_tau: zero exceedances");
    return static_cast<double>(n) * static_cast<double>(exceed) / static_cast<double>(total);
}

EstimateReport intervals_theta(std::span<const double> path, double u) {
    std::vector<std::size_t> times;  // 1-based exceedance positions
    for (std::size_t t = 0; t < path.size(); ++t)
        if (path[t] > u) times.push_back(t + 1);
    const std::size_t n_ex = times.size();
    if (n_ex < 2)
        throw std::domain_error("intervals estimator needs at least 2 exceedances");

    double max_gap = 0.0, s1 = 0.0, s2 = 0.0, s1m = 0.0, s2m = 0.0;
    for (std::size_t i = 1; i < n_ex; ++i) {
        const double g = static_cast<double>(times[i] - times[i - 1]);
        max_gap = std::max(max_gap, g);
        s1 += g;
        s2 += g * g;
        s1m += g - 1.0;
        s2m += (g - 1.0) * (g - 2.0);
    }
    const double m = static_cast<double>(n_ex - 1);  // gap count
    double raw;
    if (max_gap <= 2.0)
        raw = 2.0 * s1 * s1 / (m * s2);
    else
        raw = 2.0 * s1m * s1m / (m * s2m);

    EstimateReport r;
    r.method = "intervals_theta";
    r.point = std::min(1.0, raw);
    r.stderr_ = r.point / std::sqrt(static_cast<double>(n_ex));
    r.tuning["u"] = u;
    r.tuning["exceedances"] = static_cast<double>(n_ex);
    r.sample_size = path.size();
    return r;
}

EstimateReport blocks_theta(std::span<const double> path, double u,
                            std::size_t block) {
    if (block < 1) throw std::invalid_argument("blocks estimator needs block >= 1");
    std::size_t exceed = 0, touched = 0;
    bool current_touched = false;
    for (std::size_t t = 0; t < path.size(); ++t) {
        if (t % block == 0) current_touched = false;
        if (path[t] > u) {
            ++exceed;
            if (!current_touched) {
                current_touched = true;
                ++touched;
            }
        }
    }
    if (exceed == 0) throw std::domain_error("blocks estimator: zero exceedances");

    EstimateReport r;
    r.method = "blocks_theta";
    r.point = std::min(1.0, static_cast<double>(touched) / static_cast<double>(exceed));
    r.stderr_ = r.point / std::sqrt(static_cast<double>(exceed));
    r.tuning["u"] = u;
    r.tuning["block"] = static_cast<double>(block);
    r.tuning["exceedances"] = static_cast<double>(exceed);
    r.sample_size = path.size();
    return r;
}

}  // namespace randlen::est
