#include "randlen/lengths.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "randlen/seeding.hpp"

namespace randlen::len {

using seeding::Rng;

void LengthLaw::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("length law needs finite alpha > 0");
    if (min_value < 1) throw std::invalid_argument("length law needs min_value >= 1");
    if (ell_tilde.kind != rv::SlowlyVarying::Kind::Constant)
        throw std::invalid_argument(
            "length sampling supports constant slowly varying factors only");
}

std::uint64_t length_from_uniform(const LengthLaw& law, double u) {
    law.validate();
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("length_from_uniform needs u in (0,1)");
    const double v = std::pow(law.ell_tilde.c / u, 1.0 / law.alpha);
    if (v >= 9.0e18) return std::max<std::uint64_t>(law.min_value, 9000000000000000000ULL);
    const auto n = static_cast<std::uint64_t>(std::ceil(v));
    return std::max(law.min_value, n);
}

double length_tail(const LengthLaw& law, double x) {
    law.validate();
    if (x < static_cast<double>(law.min_value)) return 1.0;
    const double j = std::floor(x);
    return std::min(1.0, law.ell_tilde.c * std::pow(j, -law.alpha));
}

std::vector<std::uint64_t> sample_lengths(const LengthLaw& law, std::size_t count,
                                          std::uint64_t seed) {
    law.validate();
    if (count == 0) throw std::invalid_argument("sample_lengths needs count >= 1");
    Rng rng(seed);
    std::vector<std::uint64_t> out(count);
    for (auto& n : out) n = length_from_uniform(law, rng.uniform01());
    return out;
}

void RandomD::validate() const {
    if (support.empty() || support.size() != probs.size())
        throw std::invalid_argument("random d needs matching support/probs");
    if (c_bound <= 1) throw std::invalid_argument("random d needs C > 1");
    double total = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i] < 2)
            throw std::invalid_argument("random d support must lie in {2,3,...}");
        if (i > 0 && support[i] <= support[i - 1])
            throw std::invalid_argument("random d support must be strictly increasing");
        if (probs[i] < 0.0) throw std::invalid_argument("random d probs must be >= 0");
        total += probs[i];
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("random d probs must sum to 1");
}

void RandomD::validate_against_width(std::uint64_t l_n) const {
    validate();
    const std::uint64_t d_n = std::min<std::uint64_t>(static_cast<std::uint64_t>(c_bound), l_n);
    if (static_cast<std::uint64_t>(max_support()) >= d_n)
        throw std::invalid_argument("random d support must stay below min(C, l_n)");
}

int RandomD::max_support() const { return support.back(); }

int sample_d(const RandomD& rd, std::uint64_t seed) {
    rd.validate();
    Rng rng(seed);
    const double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t i = 0; i < rd.support.size(); ++i) {
        acc += rd.probs[i];
        if (u < acc) return rd.support[i];
    }
    return rd.support.back();
}

double empirical_regime_ratio(const LengthLaw& law, const rv::ThresholdRule& rule,
                              double z1, std::uint64_t n, double chi) {
    law.validate();
    rule.validate();
    if (!(z1 > 0.0)) throw std::invalid_argument("regime ratio needs z1 > 0");
    if (n == 0) throw std::invalid_argument("regime ratio needs n >= 1");
    if (!(chi > 0.0)) throw std::invalid_argument("regime ratio needs chi > 0");

    const double nd = static_cast<double>(n);
    const double l = std::pow(nd, chi);
    const double num =
        l <= static_cast<double>(law.min_value) ? 1.0 : law.ell_tilde.c * std::pow(l, -law.alpha);

    const double x = threshold_u(n, rule) / z1;
    const double den = rule.ell1(x) * std::pow(x, -rule.k1);
    return num / den;
}

}  // namespace randlen::len
