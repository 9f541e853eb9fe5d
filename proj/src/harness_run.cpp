#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "randlen/harness.hpp"
#include "randlen/seeding.hpp"

namespace randlen::harness {

namespace {

constexpr double kCapTailTarget = 1e-6;  // P{N > width} aimed below this

/// Materialized column count. Wide enough that truncating N at it is a
/// negligible-probability event, but no wider than the auxiliary scale
/// n^(chi + 2*delta), delta = (chi0 - chi)/3, that the length-dominant
/// analysis allows.
std::size_t materialized_width(std::size_t n, double chi, const rv::SeriesProfile& profile,
                               const std::optional<len::LengthLaw>& law,
                               std::uint64_t l_n) {
    if (!law) return static_cast<std::size_t>(l_n);
    const double chi0 = rv::chi_upper(profile.k1, profile.k);
    const double delta = std::max(0.0, (chi0 - chi) / 3.0);
    const double l_tilde =
        std::ceil(std::pow(static_cast<double>(n), std::min(chi + 2.0 * delta, chi0)));
    const double n_cap = std::ceil(std::pow(law->ell_tilde.c / kCapTailTarget, 1.0 / law->alpha));
    double w = std::max(static_cast<double>(l_n), std::min(l_tilde, n_cap));
    w = std::max(w, static_cast<double>(law->min_value));
    if (w > 1e6) throw ConfigError("materialized width exceeds 1e6 columns");
    return static_cast<std::size_t>(w);
}

void run_replications(std::size_t count, unsigned threads,
                      const std::function<void(std::size_t)>& work) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t r = 0; r < count; ++r) work(r);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned t_count = std::min<unsigned>(threads, static_cast<unsigned>(count));
    pool.reserve(t_count);
    for (unsigned t = 0; t < t_count; ++t)
        pool.emplace_back([&] {
            for (std::size_t r = next.fetch_add(1); r < count; r = next.fetch_add(1)) work(r);
        });
    for (auto& th : pool) th.join();
}

/// Array instance a replication actually samples: d minimal columns drawn
/// from the template list (which may be shorter when d is random).
cols::ArrayModel instantiate(const cols::ArrayModel& model, int d) {
    cols::ArrayModel inst = model;
    inst.profile.d = d;
    if (model.minimal_columns.size() > 1) {
        if (static_cast<std::size_t>(d) > model.minimal_columns.size())
            throw ConfigError("drawn d exceeds the minimal column templates");
        inst.minimal_columns.assign(model.minimal_columns.begin(),
                                    model.minimal_columns.begin() + d);
    }
    if (model.coupling.kind == cols::Coupling::Kind::ScaledMinimalColumns) {
        if (static_cast<std::size_t>(d) > model.coupling.scale.size())
            throw ConfigError("drawn d exceeds the coupling scale constants");
        inst.coupling.scale.assign(model.coupling.scale.begin(),
                                   model.coupling.scale.begin() + d);
    }
    return inst;
}

struct SidePlan {
    const cols::ArrayModel* model = nullptr;
    const std::optional<len::LengthLaw>* law = nullptr;
    const std::optional<len::RandomD>* random_d = nullptr;
    std::vector<double> z;        // materialized weights (signed side keeps sign)
    std::vector<double> z_abs;    // |z|
    std::uint64_t l_n = 0;
    std::size_t width = 0;
    std::uint64_t array_tag = 0;  // seed stream tag
    std::uint64_t length_tag = 0;
    std::uint64_t d_tag = 0;
};

SidePlan plan_side(const cols::ArrayModel& model, const WeightSpec& weights,
                   const std::optional<len::LengthLaw>& law,
                   const std::optional<len::RandomD>& random_d, std::size_t n, double chi,
                   bool negative_side) {
    model.validate();
    if (law) law->validate();
    SidePlan p;
    p.model = &model;
    p.law = &law;
    p.random_d = &random_d;
    p.l_n = rv::length_scale(n, chi);
    if (p.l_n < static_cast<std::uint64_t>(model.profile.d))
        throw ConfigError("width l_n = " + std::to_string(p.l_n) +
                          " is below the minimal column count d");
    p.width = materialized_width(n, chi, model.profile, law, p.l_n);
    p.z = weights.materialize(p.width);
    p.z_abs = p.z;
    for (auto& v : p.z_abs) v = std::abs(v);
    for (double v : p.z) {
        if (v == 0.0 || !std::isfinite(v))
            throw ConfigError("weights must be nonzero and finite");
        if (!negative_side && v < 0.0)
            throw ConfigError("positive-side weights must be > 0");
        if (negative_side && v > 0.0)
            throw ConfigError("negative-side weights must be < 0");
    }
    if (random_d) random_d->validate_against_width(p.l_n);

    if (model.coupling.kind == cols::Coupling::Kind::OrderedRows) {
        // Column 1 must dominate pathwise: |z_j| * rho^(j-1) <= |z_1|.
        double scale = 1.0;
        for (int jj = 1; jj < model.profile.d; ++jj) {
            scale *= model.coupling.rho;
            if (p.z_abs[static_cast<std::size_t>(jj)] * scale > p.z_abs[0])
                throw ConfigError(
                    "ordered-rows weights fail the dominance condition |z_j| rho^(j-1) <= |z_1|");
        }
    }
    p.array_tag = negative_side ? 102 : 101;
    p.length_tag = negative_side ? std::uint64_t{seeding::kStreamLengthNeg}
                                 : std::uint64_t{seeding::kStreamLength};
    p.d_tag = negative_side ? 105 : std::uint64_t{seeding::kStreamRandomD};
    return p;
}

struct SideDraw {
    cols::Matrix mat;
    std::vector<std::uint32_t> n_terms;
    int d_drawn = 0;
    std::size_t cap_count = 0;
};

SideDraw draw_side(const SidePlan& p, std::size_t n, std::uint64_t rep_seed) {
    SideDraw out;
    out.d_drawn = p.model->profile.d;
    if (*p.random_d)
        out.d_drawn = len::sample_d(**p.random_d, seeding::derive(rep_seed, p.d_tag));
    const cols::ArrayModel inst = instantiate(*p.model, out.d_drawn);
    out.mat = cols::sample_array(inst, n, p.width, seeding::derive(rep_seed, p.array_tag));
    out.n_terms.resize(n);
    if (*p.law) {
        const auto ns =
            len::sample_lengths(**p.law, n, seeding::derive(rep_seed, p.length_tag));
        for (std::size_t t = 0; t < n; ++t) {
            if (ns[t] > p.width) {
                ++out.cap_count;
                out.n_terms[t] = static_cast<std::uint32_t>(p.width);
            } else {
                out.n_terms[t] = static_cast<std::uint32_t>(ns[t]);
            }
        }
    } else {
        std::fill(out.n_terms.begin(), out.n_terms.end(),
                  static_cast<std::uint32_t>(p.l_n));
    }
    return out;
}

}  // namespace

RawResults run_scenario(const ExperimentConfig& cfg) {
    if (cfg.n == 0) throw ConfigError("n must be >= 1");
    if (cfg.replications == 0) throw ConfigError("replications must be >= 1");
    if (!(cfg.chi > 0.0)) throw ConfigError("chi must be > 0");

    const SidePlan pos = plan_side(cfg.array, cfg.weights, cfg.length_law, cfg.random_d,
                                   cfg.n, cfg.chi_pos(), /*negative_side=*/false);
    std::optional<SidePlan> neg;
    if (cfg.signed_mode) {
        const auto& s = *cfg.signed_mode;
        neg = plan_side(s.array_neg, s.weights_neg, s.length_law_neg, s.random_d_neg,
                        cfg.n, s.chi_neg, /*negative_side=*/true);
    }

    RawResults res;
    res.config = cfg;
    res.dims.l_n = pos.l_n;
    res.dims.width = pos.width;
    if (neg) {
        res.dims.l_n_neg = neg->l_n;
        res.dims.width_neg = neg->width;
    }
    res.reps.resize(cfg.replications);

    const agg::WeightVector w_pos = agg::WeightVector::positive(pos.z_abs);
    std::optional<agg::WeightVector> w_neg_abs;
    if (neg) w_neg_abs = agg::WeightVector::positive(neg->z_abs);

    auto simulate_one = [&](std::size_t r) {
        const std::uint64_t rep_seed =
            seeding::derive(cfg.seed, seeding::kStreamReplication, r);
        ReplicationData& rep = res.reps[r];
        const std::size_t n = cfg.n;
        rep.y_star.resize(n);
        rep.y_sum.resize(n);
        rep.n_terms.resize(n);

        SideDraw dp = draw_side(pos, n, rep_seed);
        rep.d_drawn = dp.d_drawn;
        rep.cap_count = dp.cap_count;

        if (!neg) {
            for (std::size_t t = 0; t < n; ++t) {
                const auto row = dp.mat.row(t);
                const std::size_t terms = dp.n_terms[t];
                const double y_star = agg::weighted_max(w_pos, row, terms);
                const double y_sum = agg::weighted_sum(w_pos, row, terms);
                rep.y_star[t] = y_star;
                rep.y_sum[t] = y_sum;
                rep.n_terms[t] = dp.n_terms[t];
                const double lead = pos.z_abs[0] * row[0];
                if (!(lead <= y_star && y_star <= y_sum)) ++rep.sandwich_violations;
            }
            return;
        }

        SideDraw dn = draw_side(*neg, n, rep_seed);
        rep.d_drawn_neg = dn.d_drawn;
        rep.cap_count += dn.cap_count;
        rep.y_star_neg.resize(n);
        for (std::size_t t = 0; t < n; ++t) {
            const auto row_p = dp.mat.row(t);
            const auto row_n = dn.mat.row(t);
            const std::size_t tp = dp.n_terms[t];
            const std::size_t tn = dn.n_terms[t];
            const double star_p = agg::weighted_max(w_pos, row_p, tp);
            const double sum_p = agg::weighted_sum(w_pos, row_p, tp);
            const double star_n = -agg::weighted_max(*w_neg_abs, row_n, tn);
            const double sum_n = -agg::weighted_sum(*w_neg_abs, row_n, tn);
            rep.y_star[t] = star_p;       // Y* = max(Y*+, Y*-) = Y*+
            rep.y_star_neg[t] = star_n;   // Y** = Y*-
            rep.y_sum[t] = sum_p + sum_n;
            rep.n_terms[t] = static_cast<std::uint32_t>(tp + tn);
            const double lead = pos.z_abs[0] * row_p[0];
            if (!(lead <= star_p && star_p <= sum_p)) ++rep.sandwich_violations;
        }
    };

    run_replications(cfg.replications, cfg.threads, simulate_one);
    return res;
}

double RawResults::cap_frequency() const {
    std::size_t caps = 0;
    for (const auto& r : reps) caps += r.cap_count;
    const double rows = static_cast<double>(reps.size()) * static_cast<double>(config.n) *
                        (config.is_signed() ? 2.0 : 1.0);
    return rows == 0.0 ? 0.0 : static_cast<double>(caps) / rows;
}

std::size_t RawResults::sandwich_violations() const {
    std::size_t v = 0;
    for (const auto& r : reps) v += r.sandwich_violations;
    return v;
}

double path_value(const ReplicationData& rep, PathKind kind, std::size_t t) {
    switch (kind) {
        case PathKind::Star: return rep.y_star[t];
        case PathKind::Sum: return rep.y_sum[t];
        case PathKind::StarNegFlipped: return -rep.y_star_neg[t];
        case PathKind::SumFlipped: return -rep.y_sum[t];
    }
    return 0.0;
}

ThetaDefEstimate theta_def_estimate(const RawResults& res, PathKind kind,
                                    const rv::ThresholdRule& rule, std::size_t horizon) {
    const std::size_t n = res.horizon();
    std::size_t m = horizon == 0 ? n : horizon;
    if (m < 1 || m > n)
        throw std::invalid_argument("theta horizon must lie in [1, n]");
    const std::size_t blocks_per_rep = n / m;
    const double u = rv::threshold_u(m, rule);

    std::size_t below = 0, blocks = 0, exceed = 0, values = 0;
    for (const auto& rep : res.reps) {
        for (std::size_t b = 0; b < blocks_per_rep; ++b) {
            bool block_below = true;
            for (std::size_t t = b * m; t < (b + 1) * m; ++t) {
                const double v = path_value(rep, kind, t);
                if (v > u) {
                    ++exceed;
                    block_below = false;
                }
                ++values;
            }
            below += block_below;
            ++blocks;
        }
    }
    const double p_hat = static_cast<double>(below) / static_cast<double>(blocks);
    if (exceed == 0)
        throw std::domain_error("degenerate: no exceedances at the evaluation threshold");
    const double tau_hat = static_cast<double>(m) * static_cast<double>(exceed) /
                           static_cast<double>(values);
    const est::ThetaEstimate theta = est::definition_theta(p_hat, tau_hat);

    ThetaDefEstimate out;
    out.tau_hat = tau_hat;
    out.p_hat = p_hat;
    out.clipped = theta.clipped;
    out.report.method = "definition_theta";
    out.report.point = theta.value;
    // Binomial noise in P{M_m <= u_m} plus the exceedance-rate noise in tau.
    const double var_p = (1.0 - p_hat) / (p_hat * static_cast<double>(blocks));
    const double var_tau_rel = 1.0 / static_cast<double>(exceed);
    out.report.stderr_ =
        std::sqrt(var_p / (tau_hat * tau_hat) + theta.value * theta.value * var_tau_rel);
    out.report.tuning["u"] = u;
    out.report.tuning["horizon"] = static_cast<double>(m);
    out.report.tuning["blocks"] = static_cast<double>(blocks);
    out.report.tuning["tau_hat"] = tau_hat;
    out.report.tuning["p_hat"] = p_hat;
    out.report.tuning["exceedances"] = static_cast<double>(exceed);
    out.report.tuning["clipped"] = theta.clipped ? 1.0 : 0.0;
    out.report.sample_size = blocks;
    return out;
}

est::EstimateReport hill_pooled(const RawResults& res, PathKind kind,
                                std::size_t k_order) {
    std::vector<double> pooled;
    pooled.reserve(res.reps.size() * res.horizon());
    std::size_t dropped = 0;
    const bool flipped = kind == PathKind::StarNegFlipped || kind == PathKind::SumFlipped;
    for (const auto& rep : res.reps)
        for (std::size_t t = 0; t < res.horizon(); ++t) {
            const double v = path_value(rep, kind, t);
            if (flipped && !(v > 0.0)) {
                ++dropped;
                continue;
            }
            pooled.push_back(v);
        }
    if (pooled.size() < 2) throw std::domain_error("hill: too few positive values");
    if (k_order == 0) k_order = est::default_k_order(pooled.size());
    est::EstimateReport r = est::hill(pooled, k_order);
    if (dropped > 0) r.tuning["dropped_nonpositive"] = static_cast<double>(dropped);
    return r;
}

double tau_at(const RawResults& res, PathKind kind, double u) {
    if (!(u > 0.0)) throw std::invalid_argument("tau_at needs u > 0");
    std::size_t exceed = 0, total = 0;
    for (const auto& rep : res.reps)
        for (std::size_t t = 0; t < res.horizon(); ++t) {
            exceed += path_value(rep, kind, t) > u;
            ++total;
        }
    if (exceed == 0) throw std::domain_error("tau_at: zero exceedances");
    return static_cast<double>(res.horizon()) * static_cast<double>(exceed) /
           static_cast<double>(total);
}

}  // namespace randlen::harness
