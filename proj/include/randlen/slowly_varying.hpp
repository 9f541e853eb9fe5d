#pragma once

#include <cstdint>
#include <string>

namespace randlen::rv {

/// Slowly varying factor of a regularly varying tail, restricted to a family
/// that is closed under powers and de Bruijn conjugation:
///   Constant:  l(x) = c
///   LogPower:  l(x) = c * (ln x)^beta   for x > e
struct SlowlyVarying {
    enum class Kind { Constant, LogPower };

    Kind kind = Kind::Constant;
    double c = 1.0;     // scale, > 0
    double beta = 0.0;  // log exponent (LogPower only)

    static SlowlyVarying constant(double c);
    static SlowlyVarying log_power(double c, double beta);

    /// Evaluate l(x). Below x = e the LogPower member is continued with its
    /// boundary value c so diagnostics never hit a log of a negative number;
    /// tail evaluations that must refuse small x do so before calling this.
    double operator()(double x) const;

    /// l(x)^p stays in the family: (c, beta) -> (c^p, p*beta).
    SlowlyVarying power(double p) const;

    bool is_constant() const { return kind == Kind::Constant; }
    bool operator==(const SlowlyVarying&) const = default;

    std::string describe() const;
};

/// Asymptotic de Bruijn conjugate within the family:
///   Constant(c)      -> Constant(1/c)
///   LogPower(c,beta) -> LogPower(1/c, -beta)
/// Satisfies lsharp(x) * l(x * lsharp(x)) -> 1 as x -> infinity; for LogPower
/// the convergence is logarithmically slow.
SlowlyVarying debruijn_conjugate(const SlowlyVarying& ell);

/// Smallest x0 such that l(x) <= A * x^delta for all x >= x0 (A > 1,
/// delta > 0). Exists for every family member; found by doubling/bisection.
double uniform_bound_x0(const SlowlyVarying& ell, double a_bound, double delta);

}  // namespace randlen::rv
