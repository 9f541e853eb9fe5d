#pragma once

#include <cstdint>
#include <vector>

#include "randlen/rv_core.hpp"

namespace randlen::len {

/// Regularly varying term-count law: P(N > x) = x^(-alpha) * lt(x) for large
/// x, N >= min_value. With lt = Constant(c) the sampler is an exact discrete
/// Pareto: P(N > j) = c * j^(-alpha) for every integer j >= max(min_value,
/// c^(1/alpha)).
struct LengthLaw {
    double alpha = 2.0;
    rv::SlowlyVarying ell_tilde;
    std::uint64_t min_value = 1;

    void validate() const;
};

/// Inverse-transform value for a uniform level u in (0,1):
/// N = max(min_value, ceil((c/u)^(1/alpha))). Exposed so the tail identity is
/// checkable against enumeration.
std::uint64_t length_from_uniform(const LengthLaw& law, double u);

/// Exact tail P(N > x) at a real argument (floor semantics for the discrete
/// variable).
double length_tail(const LengthLaw& law, double x);

/// i.i.d. draws, deterministic given seed.
std::vector<std::uint64_t> sample_lengths(const LengthLaw& law, std::size_t count,
                                          std::uint64_t seed);

/// Bounded discrete law for the number d of minimal-index columns:
/// support in [2, C-1], d < min(C, l_n) enforced at scenario assembly.
struct RandomD {
    std::vector<int> support;
    std::vector<double> probs;
    int c_bound = 2;  // the C of d_n = min(C, l_n)

    void validate() const;
    /// Throws unless max(support) < min(C, l_n).
    void validate_against_width(std::uint64_t l_n) const;
    int max_support() const;
};

int sample_d(const RandomD& rd, std::uint64_t seed);

/// Analytic ratio P{N > n^chi} / P{z1 Y > u_n} from the regularly varying
/// forms evaluated at real arguments (pure exponent arithmetic, no integer
/// rounding). Confirms the regime classification at finite n; tends to 1 in
/// the balanced regime when the constants match.
double empirical_regime_ratio(const LengthLaw& law, const rv::ThresholdRule& rule,
                              double z1, std::uint64_t n, double chi);

}  // namespace randlen::len
