#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "randlen/rv_core.hpp"

namespace randlen::cols {

/// Within-column serial dynamics, each with a known extremal index:
///   Iid          -> theta = 1
///   Armax(phi)   -> theta = 1 - phi   (max-autoregression of a Frechet core)
///   MovingMax(m) -> theta = 1/m       (running maximum over m innovations)
struct Dynamics {
    enum class Kind { Iid, Armax, MovingMax };

    Kind kind = Kind::Iid;
    double phi = 0.0;  // Armax, in [0,1)
    int m = 1;         // MovingMax, >= 1

    static Dynamics iid() { return {}; }
    static Dynamics armax(double phi);
    static Dynamics moving_max(int m);

    void validate() const;
    bool operator==(const Dynamics&) const = default;
};

enum class MarginFamily { Frechet, Pareto };

/// One stationary column: marginal tail, serial dynamics, margin family.
/// Frechet margins realize l -> Constant(c) asymptotically via scale c^(1/k);
/// Pareto margins realize Constant(c) exactly. Log-power margins are not
/// sampleable in closed form and are rejected.
struct ColumnModel {
    rv::TailSpec marginal;
    Dynamics dynamics;
    MarginFamily margin = MarginFamily::Frechet;

    void validate() const;

    /// Exact q-quantile of the marginal (for oracle tests).
    double quantile(double q) const;
    /// Exact survival P{Y > x} of the sampled marginal.
    double survival(double x) const;
};

/// Ground-truth extremal index of the column's dynamics.
double true_extremal_index(const ColumnModel& model);

/// Stationary path of length n; deterministic given (model, n, seed).
std::vector<double> sample_column(const ColumnModel& model, std::size_t n,
                                  std::uint64_t seed);

/// Cross-column coupling of the d minimal columns.
///   IndependentColumns   - mutually independent minimal columns
///   ScaledMinimalColumns - column i = c_i^(1/k1) * independent base column
///   SharedBoundedFactor  - one uniform[lo,hi] factor per row multiplies all
///                          minimal columns
///   OrderedRows          - column j = rho^(j-1) * column 1 (dominant first
///                          column, pathwise)
///   CumulativeSums       - column i = sum of all previous columns
struct Coupling {
    enum class Kind {
        IndependentColumns,
        ScaledMinimalColumns,
        SharedBoundedFactor,
        OrderedRows,
        CumulativeSums,
    };

    Kind kind = Kind::IndependentColumns;
    std::vector<double> scale;  // ScaledMinimalColumns: c_i per minimal column
    double lo = 1.0;            // SharedBoundedFactor: 1 <= lo < hi
    double hi = 2.0;
    double rho = 1.0;           // OrderedRows: in (0,1]

    static Coupling independent();
    static Coupling scaled(std::vector<double> c);
    static Coupling shared_factor(double lo, double hi);
    static Coupling ordered_rows(double rho);
    static Coupling cumulative_sums();

    std::string name() const;
};

/// Doubly-indexed array: d minimal columns with tail index k1 coupled per
/// `coupling`, bulk columns i > d i.i.d. copies of `bulk_template` with tail
/// index k.
struct ArrayModel {
    rv::SeriesProfile profile;
    std::vector<ColumnModel> minimal_columns;  // size d (size 1 allowed for
                                               // derived-copy couplings)
    ColumnModel bulk_template;
    Coupling coupling;

    void validate() const;
    const ColumnModel& minimal(int j) const;  // j in [0, d)
};

/// Row-major n x l sample matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
    std::span<const double> row(std::size_t r) const {
        return {a.data() + r * cols, cols};
    }
};

/// Sample the n x l array. Columns 1..d follow the coupling; columns d+1..l
/// are independent bulk columns. Deterministic given (model, n, l, seed).
Matrix sample_array(const ArrayModel& model, std::size_t n, std::size_t l,
                    std::uint64_t seed);

/// Per-column limits c_i of P{Y_i > x} / (x^(-k1) l1(x)) for couplings where
/// they exist in closed form; ordered/cumulative couplings have a pathwise
/// dominant column instead and are rejected.
std::vector<double> a2_constants(const ArrayModel& model);

}  // namespace randlen::cols
