#include "randlen/slowly_varying.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace randlen::rv {

SlowlyVarying SlowlyVarying::constant(double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("slowly varying scale c must be finite and > 0");
    return SlowlyVarying{Kind::Constant, c, 0.0};
}

SlowlyVarying SlowlyVarying::log_power(double c, double beta) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("slowly varying scale c must be finite and > 0");
    if (!std::isfinite(beta))
        throw std::invalid_argument("log exponent beta must be finite");
    if (beta == 0.0) return constant(c);
    return SlowlyVarying{Kind::LogPower, c, beta};
}

double SlowlyVarying::operator()(double x) const {
    if (!(x > 0.0)) throw std::domain_error("slowly varying function needs x > 0");
    if (kind == Kind::Constant) return c;
    const double lx = std::log(std::max(x, std::numbers::e));
    return c * std::pow(lx, beta);
}

SlowlyVarying SlowlyVarying::power(double p) const {
    if (kind == Kind::Constant) return constant(std::pow(c, p));
    return log_power(std::pow(c, p), beta * p);
}

std::string SlowlyVarying::describe() const {
    if (kind == Kind::Constant) return "constant(c=" + std::to_string(c) + ")";
    return "log_power(c=" + std::to_string(c) + ", beta=" + std::to_string(beta) + ")";
}

SlowlyVarying debruijn_conjugate(const SlowlyVarying& ell) {
    if (ell.kind == SlowlyVarying::Kind::Constant)
        return SlowlyVarying::constant(1.0 / ell.c);
    return SlowlyVarying::log_power(1.0 / ell.c, -ell.beta);
}

double uniform_bound_x0(const SlowlyVarying& ell, double a_bound, double delta) {
    if (!(a_bound > 1.0)) throw std::invalid_argument("uniform bound needs A > 1");
    if (!(delta > 0.0)) throw std::invalid_argument("uniform bound needs delta > 0");

    auto ok = [&](double x) { return ell(x) <= a_bound * std::pow(x, delta); };

    // (ln x)^beta / x^delta is eventually decreasing, so once the bound holds
    // past the turning point e^(beta/delta) it holds forever.
    double lo = std::numbers::e;
    if (ell.kind == SlowlyVarying::Kind::LogPower && ell.beta > 0.0)
        lo = std::max(lo, std::exp(ell.beta / delta));
    if (ok(lo)) return lo;

    double hi = lo * 2.0;
    while (!ok(hi)) {
        hi *= 2.0;
        if (hi > 1e300) throw std::runtime_error("uniform bound search diverged");
    }
    for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace randlen::rv
