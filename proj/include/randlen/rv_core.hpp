#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "randlen/slowly_varying.hpp"

namespace randlen::rv {

/// A regularly varying marginal: P{Y > x} = l(x) * x^(-k) with tail index
/// k > 0 and slowly varying l from the closed family.
struct TailSpec {
    double k = 1.0;
    SlowlyVarying ell;

    /// Smallest x at which the survival form is a valid probability (<= 1)
    /// and nonincreasing. For Constant(c) this is c^(1/k); for LogPower it
    /// also clears the turning point of (ln x)^beta * x^(-k).
    double x_min() const;

    void validate() const;
    bool operator==(const TailSpec&) const = default;
};

/// Survival probability l(x) * x^(-k), capped at 1. Refuses x below the
/// spec's validity point (and x <= e for LogPower factors).
double marginal_tail(const TailSpec& spec, double x);

/// Normalizing threshold u_n = y * n^(1/k1) * l1#(n), where l1#(x) is the de
/// Bruijn conjugate of the function l with l1 = l^(-k1), evaluated at x^(1/k1).
/// For l1 = Constant(c) this reduces to u_n = y * (c*n)^(1/k1); then
/// n * P{Y > u_n} = y^(-k1) holds exactly for the matching marginal.
struct ThresholdRule {
    double y = 1.0;
    double k1 = 1.0;
    SlowlyVarying ell1;

    void validate() const;
    bool operator==(const ThresholdRule&) const = default;
};

double threshold_u(std::uint64_t n, const ThresholdRule& rule);

/// l1#(x) in closed form for the family (used by threshold_u and tests).
double ell1_sharp(const SlowlyVarying& ell1, double k1, double x);

/// Upper bound chi0 = (k - k1) / (k1 * (k + 1)) for the width exponent.
/// Requires k1 < k.
double chi_upper(double k1, double k);

/// Width sequence l_n = floor(n^chi), at least 1. Requires chi > 0.
std::uint64_t length_scale(std::uint64_t n, double chi);

/// Weighted extremal index of a max/sum aggregate over d independent minimal
/// columns: theta(z) = sum_j theta_j z_j^k1 / sum_j z_j^k1.
double theta_weighted(std::span<const double> thetas, std::span<const double> z,
                      double k1);

/// Relation between the term-count tail and the heaviest term's tail at the
/// normalizing threshold, decided by the exponent product alpha * chi.
enum class Regime { TermDominant, LengthDominant, Balanced };

Regime classify_regime(double alpha, double chi);
std::string to_string(Regime r);

/// The two extra inequalities of the length-dominant regime, evaluated with
/// chi0 = chi_upper(k1, k):
///   cond_4d: alpha*chi0 > 1 + (alpha/k1)*delta_star   (tail-index claim)
///   cond_4e: alpha*chi0 > 1 + (1 - alpha*chi)/2       (extremal-index claim)
struct LengthDominantConditions {
    bool cond_4d = false;
    bool cond_4e = false;
};

LengthDominantConditions check_t5_conditions(double alpha, double chi, double k1,
                                             double k, double delta_star);

/// Column-index profile of a doubly-indexed array: d minimal columns with
/// tail index k1, the rest bounded below by k > k1.
struct SeriesProfile {
    int d = 1;
    double k1 = 1.0;
    double k = 2.0;
    std::vector<double> tail_indices;  // per-column k_i for i > d (optional)

    void validate() const;
};

}  // namespace randlen::rv
