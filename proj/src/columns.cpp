#include "randlen/columns.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "randlen/seeding.hpp"

namespace randlen::cols {

using seeding::Rng;

Dynamics Dynamics::armax(double phi) {
    Dynamics d{Kind::Armax, phi, 1};
    d.validate();
    return d;
}

Dynamics Dynamics::moving_max(int m) {
    Dynamics d{Kind::MovingMax, 0.0, m};
    d.validate();
    return d;
}

void Dynamics::validate() const {
    switch (kind) {
        case Kind::Iid: break;
        case Kind::Armax:
            if (!(phi >= 0.0 && phi < 1.0))
                throw std::invalid_argument("armax needs phi in [0,1)");
            break;
        case Kind::MovingMax:
            if (m < 1) throw std::invalid_argument("moving max needs m >= 1");
            break;
    }
}

void ColumnModel::validate() const {
    marginal.validate();
    dynamics.validate();
    if (marginal.ell.kind != rv::SlowlyVarying::Kind::Constant)
        throw std::invalid_argument(
            "column margins support constant slowly varying factors only");
}

double ColumnModel::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile needs q in (0,1)");
    const double c = marginal.ell.c, k = marginal.k;
    if (margin == MarginFamily::Frechet) return std::pow(-c / std::log(q), 1.0 / k);
    return std::pow(c / (1.0 - q), 1.0 / k);
}

double ColumnModel::survival(double x) const {
    const double c = marginal.ell.c, k = marginal.k;
    if (margin == MarginFamily::Frechet) return -std::expm1(-c * std::pow(x, -k));
    if (x <= std::pow(c, 1.0 / k)) return 1.0;
    return c * std::pow(x, -k);
}

double true_extremal_index(const ColumnModel& model) {
    model.validate();
    switch (model.dynamics.kind) {
        case Dynamics::Kind::Iid: return 1.0;
        case Dynamics::Kind::Armax: return 1.0 - model.dynamics.phi;
        case Dynamics::Kind::MovingMax: return 1.0 / model.dynamics.m;
    }
    return 1.0;
}

namespace {

inline double unit_frechet(double u) { return -1.0 / std::log(u); }

/// Stationary unit-Frechet core path. Innovations come from one substream,
/// warm-up state from another, so Armax(0) and MovingMax(1) reproduce the
/// i.i.d. path bit for bit.
std::vector<double> frechet_core(const Dynamics& dyn, std::size_t n,
                                 std::uint64_t seed) {
    Rng innov(seeding::derive(seed, seeding::kStreamInnovation));
    std::vector<double> w(n);
    switch (dyn.kind) {
        case Dynamics::Kind::Iid: {
            for (auto& v : w) v = unit_frechet(innov.uniform01());
            break;
        }
        case Dynamics::Kind::Armax: {
            // W_t = max(phi*W_{t-1}, (1-phi)*Z_t): stationary unit Frechet.
            Rng init(seeding::derive(seed, seeding::kStreamInit));
            double state = unit_frechet(init.uniform01());
            const double phi = dyn.phi;
            for (auto& v : w) {
                state = std::max(phi * state, (1.0 - phi) * unit_frechet(innov.uniform01()));
                v = state;
            }
            break;
        }
        case Dynamics::Kind::MovingMax: {
            // W_t = max(Z_{t-m+1},...,Z_t) / m: stationary unit Frechet.
            Rng init(seeding::derive(seed, seeding::kStreamInit));
            const int m = dyn.m;
            std::vector<double> ring(static_cast<std::size_t>(m));
            for (int j = 0; j + 1 < m; ++j) ring[static_cast<std::size_t>(j)] = unit_frechet(init.uniform01());
            std::size_t head = static_cast<std::size_t>(m > 1 ? m - 1 : 0);
            const double inv_m = 1.0 / m;
            for (auto& v : w) {
                ring[head] = unit_frechet(innov.uniform01());
                head = (head + 1) % static_cast<std::size_t>(m);
                v = *std::max_element(ring.begin(), ring.end()) * inv_m;
            }
            break;
        }
    }
    return w;
}

}  // namespace

std::vector<double> sample_column(const ColumnModel& model, std::size_t n,
                                  std::uint64_t seed) {
    model.validate();
    if (n == 0) throw std::invalid_argument("sample_column needs n >= 1");

    std::vector<double> path = frechet_core(model.dynamics, n, seed);
    const double k = model.marginal.k;
    const double c = model.marginal.ell.c;
    if (model.margin == MarginFamily::Frechet) {
        // Y = c^(1/k) * W^(1/k): Frechet(k) margins, survival ~ c * x^(-k).
        if (k == 1.0 && c == 1.0) return path;
        const double inv_k = 1.0 / k;
        const double scale = std::pow(c, inv_k);
        for (auto& v : path) v = scale * std::pow(v, inv_k);
    } else {
        // Monotone map through the uniform level 1 - exp(-1/W) keeps the
        // dynamics' extremal index while making the margin exactly Pareto:
        // P{Y > x} = c * x^(-k) for x >= c^(1/k).
        const double inv_k = 1.0 / k;
        for (auto& v : path) v = std::pow(c / (-std::expm1(-1.0 / v)), inv_k);
    }
    return path;
}

Coupling Coupling::independent() { return {}; }

Coupling Coupling::scaled(std::vector<double> c) {
    Coupling cp;
    cp.kind = Kind::ScaledMinimalColumns;
    cp.scale = std::move(c);
    return cp;
}

Coupling Coupling::shared_factor(double lo, double hi) {
    Coupling cp;
    cp.kind = Kind::SharedBoundedFactor;
    cp.lo = lo;
    cp.hi = hi;
    return cp;
}

Coupling Coupling::ordered_rows(double rho) {
    Coupling cp;
    cp.kind = Kind::OrderedRows;
    cp.rho = rho;
    return cp;
}

Coupling Coupling::cumulative_sums() {
    Coupling cp;
    cp.kind = Kind::CumulativeSums;
    return cp;
}

std::string Coupling::name() const {
    switch (kind) {
        case Kind::IndependentColumns: return "independent_columns";
        case Kind::ScaledMinimalColumns: return "scaled_minimal_columns";
        case Kind::SharedBoundedFactor: return "shared_bounded_factor";
        case Kind::OrderedRows: return "ordered_rows";
        case Kind::CumulativeSums: return "cumulative_sums";
    }
    return "?";
}

void ArrayModel::validate() const {
    profile.validate();
    if (minimal_columns.empty())
        throw std::invalid_argument("array needs at least one minimal column model");
    if (minimal_columns.size() != 1 &&
        minimal_columns.size() != static_cast<std::size_t>(profile.d))
        throw std::invalid_argument("minimal column models must number 1 or d");
    for (const auto& m : minimal_columns) {
        m.validate();
        if (m.marginal.k != profile.k1)
            throw std::invalid_argument("minimal column tail index must equal k1");
    }
    bulk_template.validate();
    if (bulk_template.marginal.k < profile.k)
        throw std::invalid_argument("bulk tail index must be >= k");

    switch (coupling.kind) {
        case Coupling::Kind::ScaledMinimalColumns:
            if (coupling.scale.size() != static_cast<std::size_t>(profile.d))
                throw std::invalid_argument("scaled coupling needs d scale constants");
            for (double c : coupling.scale)
                if (!(c > 0.0))
                    throw std::invalid_argument("scale constants must be > 0");
            break;
        case Coupling::Kind::SharedBoundedFactor:
            if (!(coupling.lo >= 1.0 && coupling.lo < coupling.hi))
                throw std::invalid_argument("shared factor needs 1 <= lo < hi");
            break;
        case Coupling::Kind::OrderedRows:
            if (!(coupling.rho > 0.0 && coupling.rho <= 1.0))
                throw std::invalid_argument("ordered rows needs rho in (0,1]");
            break;
        default: break;
    }
    // Derived-copy couplings replicate column 1, so a single model must serve.
    if ((coupling.kind == Coupling::Kind::OrderedRows ||
         coupling.kind == Coupling::Kind::CumulativeSums) &&
        minimal_columns.size() > 1)
        throw std::invalid_argument(
            "ordered/cumulative couplings derive columns from column 1; give one model");
}

const ColumnModel& ArrayModel::minimal(int j) const {
    if (minimal_columns.size() == 1) return minimal_columns.front();
    return minimal_columns[static_cast<std::size_t>(j)];
}

Matrix sample_array(const ArrayModel& model, std::size_t n, std::size_t l,
                    std::uint64_t seed) {
    model.validate();
    if (n == 0) throw std::invalid_argument("sample_array needs n >= 1");
    const auto d = static_cast<std::size_t>(model.profile.d);
    if (l < d) throw std::invalid_argument("array width l must be >= d");

    Matrix mat;
    mat.rows = n;
    mat.cols = l;
    mat.a.resize(n * l);

    auto write_col = [&](std::size_t c, const std::vector<double>& path) {
        for (std::size_t r = 0; r < n; ++r) mat.at(r, c) = path[r];
    };
    auto col_seed = [&](std::size_t c) {
        return seeding::derive(seed, seeding::kStreamColumn, c);
    };

    switch (model.coupling.kind) {
        case Coupling::Kind::IndependentColumns:
        case Coupling::Kind::ScaledMinimalColumns: {
            for (std::size_t j = 0; j < d; ++j) {
                auto path = sample_column(model.minimal(static_cast<int>(j)), n, col_seed(j));
                if (model.coupling.kind == Coupling::Kind::ScaledMinimalColumns) {
                    const double s = std::pow(model.coupling.scale[j], 1.0 / model.profile.k1);
                    for (auto& v : path) v *= s;
                }
                write_col(j, path);
            }
            break;
        }
        case Coupling::Kind::SharedBoundedFactor: {
            for (std::size_t j = 0; j < d; ++j)
                write_col(j, sample_column(model.minimal(static_cast<int>(j)), n, col_seed(j)));
            Rng fac(seeding::derive(seed, seeding::kStreamFactor));
            for (std::size_t r = 0; r < n; ++r) {
                const double b =
                    model.coupling.lo + (model.coupling.hi - model.coupling.lo) * fac.uniform01();
                for (std::size_t j = 0; j < d; ++j) mat.at(r, j) *= b;
            }
            break;
        }
        case Coupling::Kind::OrderedRows: {
            auto base = sample_column(model.minimal(0), n, col_seed(0));
            write_col(0, base);
            double scale = 1.0;
            for (std::size_t j = 1; j < d; ++j) {
                scale *= model.coupling.rho;
                for (std::size_t r = 0; r < n; ++r) mat.at(r, j) = scale * base[r];
            }
            break;
        }
        case Coupling::Kind::CumulativeSums: {
            auto base = sample_column(model.minimal(0), n, col_seed(0));
            write_col(0, base);
            // Column i holds the sum of all previous columns, so column 2
            // repeats column 1 and column i doubles thereafter.
            for (std::size_t j = 1; j < d; ++j)
                for (std::size_t r = 0; r < n; ++r) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < j; ++i) s += mat.at(r, i);
                    mat.at(r, j) = s;
                }
            break;
        }
    }

    for (std::size_t j = d; j < l; ++j)
        write_col(j, sample_column(model.bulk_template, n, col_seed(j)));
    return mat;
}

std::vector<double> a2_constants(const ArrayModel& model) {
    model.validate();
    const auto d = static_cast<std::size_t>(model.profile.d);
    switch (model.coupling.kind) {
        case Coupling::Kind::IndependentColumns: {
            std::vector<double> c(d);
            const double base = model.minimal(0).marginal.ell.c;
            for (std::size_t j = 0; j < d; ++j)
                c[j] = model.minimal(static_cast<int>(j)).marginal.ell.c / base;
            return c;
        }
        case Coupling::Kind::ScaledMinimalColumns:
            return model.coupling.scale;
        case Coupling::Kind::SharedBoundedFactor: {
            // E[B^k1] for B uniform on [lo, hi], in closed form.
            const double k1 = model.profile.k1;
            const double lo = model.coupling.lo, hi = model.coupling.hi;
            const double e =
                (std::pow(hi, k1 + 1.0) - std::pow(lo, k1 + 1.0)) / ((k1 + 1.0) * (hi - lo));
            return std::vector<double>(d, e);
        }
        default:
            throw std::domain_error(
                "coupling has no per-column tail constants; ordered/cumulative "
                "couplings use the dominant-column analysis instead");
    }
}

}  // namespace randlen::cols
