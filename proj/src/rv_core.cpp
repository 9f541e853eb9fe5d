#include "randlen/rv_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace randlen::rv {

namespace {
// Comparison tolerance for exponent identities like alpha*chi == 1; keeps
// rational inputs from being misclassified by the last bit of a product.
constexpr double kExponentTol = 1e-12;
}  // namespace

void TailSpec::validate() const {
    if (!(k > 0.0) || !std::isfinite(k))
        throw std::invalid_argument("tail index k must be finite and > 0");
    (void)ell;  // construction already validated the factor
}

double TailSpec::x_min() const {
    if (ell.kind == SlowlyVarying::Kind::Constant) return std::pow(ell.c, 1.0 / k);

    // Past max(e, e^(beta/k)) the survival form is decreasing; push further
    // right until it is also <= 1.
    double x = std::numbers::e;
    if (ell.beta > 0.0) x = std::max(x, std::exp(ell.beta / k));
    auto survival = [&](double v) { return ell(v) * std::pow(v, -k); };
    if (survival(x) <= 1.0) return x;
    double hi = x * 2.0;
    while (survival(hi) > 1.0) {
        hi *= 2.0;
        if (hi > 1e300) throw std::runtime_error("tail validity search diverged");
    }
    double lo = x;
    for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (survival(mid) <= 1.0 ? hi : lo) = mid;
    }
    return hi;
}

double marginal_tail(const TailSpec& spec, double x) {
    spec.validate();
    if (spec.ell.kind == SlowlyVarying::Kind::LogPower && x <= std::numbers::e)
        throw std::domain_error("marginal tail undefined at x <= e for log-power factors");
    if (x < spec.x_min())
        throw std::domain_error("marginal tail evaluated below its validity point");
    return std::min(1.0, spec.ell(x) * std::pow(x, -spec.k));
}

void ThresholdRule::validate() const {
    if (!(y > 0.0) || !std::isfinite(y))
        throw std::invalid_argument("threshold scale y must be finite and > 0");
    if (!(k1 > 0.0) || !std::isfinite(k1))
        throw std::invalid_argument("threshold tail index k1 must be finite and > 0");
}

double ell1_sharp(const SlowlyVarying& ell1, double k1, double x) {
    // l1 = l^(-k1)  ==>  l = l1^(-1/k1); conjugation and the power both stay
    // in the family, so l1#(x) = l#(x^(1/k1)) collapses to closed form:
    //   Constant(c):      c^(1/k1)
    //   LogPower(c,beta): c^(1/k1) * (ln(x)/k1)^(beta/k1)
    const double scale = std::pow(ell1.c, 1.0 / k1);
    if (ell1.kind == SlowlyVarying::Kind::Constant) return scale;
    const double lx = std::log(std::max(x, std::numbers::e)) / k1;
    return scale * std::pow(lx, ell1.beta / k1);
}

double threshold_u(std::uint64_t n, const ThresholdRule& rule) {
    rule.validate();
    if (n == 0) throw std::invalid_argument("threshold_u needs n >= 1");
    const double nd = static_cast<double>(n);
    return rule.y * std::pow(nd, 1.0 / rule.k1) * ell1_sharp(rule.ell1, rule.k1, nd);
}

double chi_upper(double k1, double k) {
    if (!(k1 > 0.0) || !std::isfinite(k1) || !std::isfinite(k))
        throw std::invalid_argument("chi_upper needs finite k1 > 0 and k");
    if (!(k1 < k))
        throw std::domain_error("degenerate profile: requires k1 < k");
    return (k - k1) / (k1 * (k + 1.0));
}

std::uint64_t length_scale(std::uint64_t n, double chi) {
    if (n == 0) throw std::invalid_argument("length_scale needs n >= 1");
    if (!(chi > 0.0)) throw std::invalid_argument("length_scale needs chi > 0");
    const double v = std::pow(static_cast<double>(n), chi);
    if (v >= 9.0e18) throw std::overflow_error("length_scale overflows 64 bits");
    const auto l = static_cast<std::uint64_t>(std::floor(v));
    return std::max<std::uint64_t>(1, l);
}

double theta_weighted(std::span<const double> thetas, std::span<const double> z,
                      double k1) {
    if (thetas.size() != z.size())
        throw std::invalid_argument("theta_weighted: mismatched lengths");
    if (thetas.empty()) throw std::invalid_argument("theta_weighted: empty input");
    if (!(k1 > 0.0)) throw std::invalid_argument("theta_weighted: k1 must be > 0");
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (!(z[j] > 0.0))
            throw std::invalid_argument("theta_weighted: weights must be positive");
        if (thetas[j] < 0.0 || thetas[j] > 1.0)
            throw std::invalid_argument("theta_weighted: theta outside [0,1]");
        const double w = std::pow(z[j], k1);
        num += thetas[j] * w;
        den += w;
    }
    return num / den;
}

Regime classify_regime(double alpha, double chi) {
    if (!(alpha > 0.0) || !(chi > 0.0))
        throw std::invalid_argument("classify_regime needs alpha > 0 and chi > 0");
    const double p = alpha * chi;
    if (std::abs(p - 1.0) <= kExponentTol) return Regime::Balanced;
    return p > 1.0 ? Regime::TermDominant : Regime::LengthDominant;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::TermDominant: return "TermDominant";
        case Regime::LengthDominant: return "LengthDominant";
        case Regime::Balanced: return "Balanced";
    }
    return "?";
}

LengthDominantConditions check_t5_conditions(double alpha, double chi, double k1,
                                             double k, double delta_star) {
    if (!(alpha > 0.0) || !(chi > 0.0) || !(delta_star > 0.0))
        throw std::invalid_argument("check_t5_conditions needs alpha, chi, delta_star > 0");
    const double lhs = alpha * chi_upper(k1, k);
    LengthDominantConditions out;
    out.cond_4d = lhs > 1.0 + (alpha / k1) * delta_star;
    out.cond_4e = lhs > 1.0 + 0.5 * (1.0 - alpha * chi);
    return out;
}

void SeriesProfile::validate() const {
    if (d < 1) throw std::invalid_argument("profile needs d >= 1");
    if (!(k1 > 0.0)) throw std::invalid_argument("profile needs k1 > 0");
    if (!(k1 < k)) throw std::domain_error("degenerate profile: requires k1 < k");
    for (double ki : tail_indices)
        if (ki < k)
            throw std::invalid_argument("profile lists a bulk tail index below k");
}

}  // namespace randlen::rv
