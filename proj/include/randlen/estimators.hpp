#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace randlen::est {

/// One estimate with the tuning that produced it (for reproducibility).
struct EstimateReport {
    std::string method;
    double point = 0.0;
    double stderr_ = 0.0;
    std::map<std::string, double> tuning;
    std::size_t sample_size = 0;
};

/// Hill estimator in tail-index parametrization (estimates k, not 1/k):
/// point = 1 / mean of ln(X_(n-i+1) / X_(n-k_order)), i = 1..k_order.
/// stderr = point / sqrt(k_order). Requires positive values and
/// 1 <= k_order < n.
EstimateReport hill(std::span<const double> sample, std::size_t k_order);

/// Default order-statistic count: floor(n^0.6) capped at n/10, at least 1.
std::size_t default_k_order(std::size_t n);

/// Extremal index straight from its definition: theta = -ln(P{M_n <= u_n}) /
/// tau. Clipped to [0,1]; `clipped` flags when the raw value fell outside.
struct ThetaEstimate {
    double value = 0.0;
    bool clipped = false;
};

ThetaEstimate definition_theta(double prob_max_below, double tau_hat);

/// tau_hat = n * pooled exceedance fraction over time and replications.
/// All paths must share one length; at least one exceedance required.
double estimate_tau(const std::vector<std::vector<double>>& paths, double u);

/// Interexceedance-times (intervals) estimator of the extremal index.
EstimateReport intervals_theta(std::span<const double> path, double u);

/// Blocks estimator: blocks containing an exceedance / total exceedances.
EstimateReport blocks_theta(std::span<const double> path, double u,
                            std::size_t block);

}  // namespace randlen::est
