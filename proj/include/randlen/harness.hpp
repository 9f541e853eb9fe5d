#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "randlen/aggregate.hpp"
#include "randlen/columns.hpp"
#include "randlen/estimators.hpp"
#include "randlen/lengths.hpp"
#include "randlen/rv_core.hpp"

namespace randlen::harness {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A theorem precondition failed; carries the specific violated condition.
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Weights as an explicit head plus a constant fill for the remaining
/// materialized columns.
struct WeightSpec {
    std::vector<double> head;
    std::optional<double> fill;

    std::vector<double> materialize(std::size_t width) const;
};

/// Negative-weight side of a signed scenario. The positive side reuses the
/// top-level array / length_law / random_d fields.
struct SignedSettings {
    double chi_neg = 0.2;
    std::optional<double> chi_pos;  // defaults to the top-level chi
    cols::ArrayModel array_neg;
    std::optional<len::LengthLaw> length_law_neg;
    std::optional<len::RandomD> random_d_neg;
    WeightSpec weights_neg;  // values < 0
};

struct EstimatorSettings {
    std::size_t theta_horizon = 0;  // 0 -> full horizon n
    std::size_t hill_k_order = 0;   // 0 -> default_k_order rule
};

/// Full scenario description; mirrors the JSON config schema.
struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::size_t replications = 1;
    double chi = 0.2;
    cols::ArrayModel array;
    WeightSpec weights;  // positive side in signed mode
    std::optional<len::LengthLaw> length_law;
    std::optional<len::RandomD> random_d;
    double threshold_y = 1.0;
    std::optional<double> threshold_k1;             // defaults to array k1
    std::optional<rv::SlowlyVarying> threshold_ell;  // defaults to minimal ell
    std::optional<SignedSettings> signed_mode;
    std::optional<double> delta_star;  // length-dominant condition parameter
    unsigned threads = 1;
    EstimatorSettings estimator;

    bool is_signed() const { return signed_mode.has_value(); }
    double chi_pos() const;
    rv::ThresholdRule rule_pos() const;
    rv::ThresholdRule rule_neg() const;  // signed mode only
};

/// Strict parse: unknown fields anywhere are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Everything one replication produced.
struct ReplicationData {
    std::vector<double> y_star;      // Y*_t
    std::vector<double> y_sum;       // Y_t
    std::vector<double> y_star_neg;  // Y**_t, signed mode only
    std::vector<std::uint32_t> n_terms;
    int d_drawn = 0;
    int d_drawn_neg = 0;
    std::size_t cap_count = 0;
    std::size_t sandwich_violations = 0;
};

struct ScenarioDims {
    std::uint64_t l_n = 0;
    std::size_t width = 0;
    std::uint64_t l_n_neg = 0;
    std::size_t width_neg = 0;
};

struct RawResults {
    ExperimentConfig config;
    ScenarioDims dims;
    std::vector<ReplicationData> reps;

    std::size_t horizon() const { return config.n; }
    double cap_frequency() const;
    std::size_t sandwich_violations() const;
};

/// Simulate all replications (concurrently when config.threads > 1; output is
/// identical either way).
RawResults run_scenario(const ExperimentConfig& cfg);

/// Which per-row sequence an estimator consumes. Flipped kinds negate the
/// stored values (the -Y** and -Y sequences of the signed decomposition).
enum class PathKind { Star, Sum, StarNegFlipped, SumFlipped };

double path_value(const ReplicationData& rep, PathKind kind, std::size_t t);

/// Definition-based extremal index at evaluation horizon m (splits each
/// replication into floor(n/m) blocks; threshold u_m from the rule).
struct ThetaDefEstimate {
    est::EstimateReport report;
    double tau_hat = 0.0;
    double p_hat = 0.0;
    bool clipped = false;
};

ThetaDefEstimate theta_def_estimate(const RawResults& res, PathKind kind,
                                    const rv::ThresholdRule& rule,
                                    std::size_t horizon);

/// Hill over all pooled values of the chosen sequence. k_order = 0 applies
/// the default rule. Flipped kinds drop nonpositive values first.
est::EstimateReport hill_pooled(const RawResults& res, PathKind kind,
                                std::size_t k_order);

/// n * pooled exceedance fraction of the chosen sequence above u.
double tau_at(const RawResults& res, PathKind kind, double u);

enum class TheoremId { T2, T3_1, T3_2, T4, C3, C4, T5i, T5ii, T6 };

TheoremId theorem_from_string(const std::string& s);
std::string to_string(TheoremId id);

struct CheckResult {
    std::string name;
    double predicted = 0.0;
    double estimated = 0.0;
    double stderr_ = 0.0;
    std::string tolerance_kind;  // "abs" or "rel"
    double tolerance = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::string theorem_id;
    bool pass = false;
    std::map<std::string, double> predicted;
    bool predicts_nonexistence = false;  // wrong-normalization side (C3/C4)
    std::vector<CheckResult> checks;
    std::map<std::string, est::EstimateReport> cross_checks;
    std::map<std::string, double> conditions;  // computed exponents and flags
    double cap_frequency = 0.0;
    std::size_t sandwich_violations = 0;
    double runtime_seconds = 0.0;
    nlohmann::json config_echo;

    nlohmann::json to_json() const;
};

// Monte Carlo tolerance policy, pinned.
inline constexpr double kThetaAbsTol = 0.10;        // extremal index, absolute
inline constexpr double kTailRelTol = 0.15;         // tail index, relative
inline constexpr double kTauRelTol = 0.10;          // exceedance-rate limit
inline constexpr double kDivergenceRelTol = 0.50;   // wrong-normalization ratio
inline constexpr std::size_t kMinReplications = 500;
inline constexpr std::size_t kMinPooledForHill = 100000;

/// Gate the config against the theorem's hypotheses (throws HypothesisError
/// naming the failed condition), simulate, and check every claim at the
/// pinned tolerances.
VerificationReport verify_theorem(TheoremId id, const ExperimentConfig& cfg);

/// CSV export: header `replicate,t,y_star,y_sum,n_terms`, 17 significant
/// digits, rows ordered by (replicate, t). Re-audits Y* <= Y on the way out.
void export_paths(const RawResults& res, const std::string& dest);

struct ImportedPaths {
    std::vector<std::vector<double>> y_star;
    std::vector<std::vector<double>> y_sum;
    std::vector<std::vector<std::uint32_t>> n_terms;
};

ImportedPaths import_paths(const std::string& src);

}  // namespace randlen::harness
