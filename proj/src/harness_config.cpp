#include <fstream>
#include <set>

#include "randlen/harness.hpp"

namespace randlen::harness {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
    if (!j.is_object()) throw ConfigError("expected an object for " + where);
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown field '" + it.key() + "' in " + where);
}

template <typename T>
T require(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("missing field '" + key + "' in " + where);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + key + "' in " + where + ": " + e.what());
    }
}

template <typename T>
T optional_or(const json& j, const std::string& key, const T& fallback,
              const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + key + "' in " + where + ": " + e.what());
    }
}

rv::SlowlyVarying parse_ell(const json& j, const std::string& where) {
    check_keys(j, {"kind", "c", "beta"}, where);
    const auto kind = require<std::string>(j, "kind", where);
    const double c = optional_or<double>(j, "c", 1.0, where);
    if (kind == "constant") return rv::SlowlyVarying::constant(c);
    if (kind == "log_power")
        return rv::SlowlyVarying::log_power(c, require<double>(j, "beta", where));
    throw ConfigError("unknown slowly varying kind '" + kind + "' in " + where);
}

json ell_to_json(const rv::SlowlyVarying& ell) {
    json j;
    j["kind"] = ell.kind == rv::SlowlyVarying::Kind::Constant ? "constant" : "log_power";
    j["c"] = ell.c;
    if (ell.kind == rv::SlowlyVarying::Kind::LogPower) j["beta"] = ell.beta;
    return j;
}

cols::Dynamics parse_dynamics(const json& j, const std::string& where) {
    check_keys(j, {"kind", "phi", "m"}, where);
    const auto kind = require<std::string>(j, "kind", where);
    if (kind == "iid") return cols::Dynamics::iid();
    if (kind == "armax") return cols::Dynamics::armax(require<double>(j, "phi", where));
    if (kind == "moving_max")
        return cols::Dynamics::moving_max(require<int>(j, "m", where));
    throw ConfigError("unknown dynamics kind '" + kind + "' in " + where);
}

json dynamics_to_json(const cols::Dynamics& d) {
    json j;
    switch (d.kind) {
        case cols::Dynamics::Kind::Iid: j["kind"] = "iid"; break;
        case cols::Dynamics::Kind::Armax:
            j["kind"] = "armax";
            j["phi"] = d.phi;
            break;
        case cols::Dynamics::Kind::MovingMax:
            j["kind"] = "moving_max";
            j["m"] = d.m;
            break;
    }
    return j;
}

cols::Coupling parse_coupling(const json& j, const std::string& where) {
    check_keys(j, {"kind", "c", "lo", "hi", "rho"}, where);
    const auto kind = require<std::string>(j, "kind", where);
    if (kind == "independent_columns") return cols::Coupling::independent();
    if (kind == "scaled_minimal_columns")
        return cols::Coupling::scaled(require<std::vector<double>>(j, "c", where));
    if (kind == "shared_bounded_factor")
        return cols::Coupling::shared_factor(require<double>(j, "lo", where),
                                             require<double>(j, "hi", where));
    if (kind == "ordered_rows")
        return cols::Coupling::ordered_rows(require<double>(j, "rho", where));
    if (kind == "cumulative_sums") return cols::Coupling::cumulative_sums();
    throw ConfigError("unknown coupling kind '" + kind + "' in " + where);
}

json coupling_to_json(const cols::Coupling& c) {
    json j;
    j["kind"] = c.name();
    switch (c.kind) {
        case cols::Coupling::Kind::ScaledMinimalColumns: j["c"] = c.scale; break;
        case cols::Coupling::Kind::SharedBoundedFactor:
            j["lo"] = c.lo;
            j["hi"] = c.hi;
            break;
        case cols::Coupling::Kind::OrderedRows: j["rho"] = c.rho; break;
        default: break;
    }
    return j;
}

cols::MarginFamily parse_margin(const std::string& s, const std::string& where) {
    if (s == "frechet") return cols::MarginFamily::Frechet;
    if (s == "pareto") return cols::MarginFamily::Pareto;
    throw ConfigError("unknown margin family '" + s + "' in " + where);
}

cols::ArrayModel parse_array(const json& j, const std::string& where) {
    check_keys(j,
               {"d", "k1", "k", "margin_family", "minimal_dynamics", "minimal_ell",
                "bulk_dynamics", "bulk_ell", "bulk_k", "coupling"},
               where);
    cols::ArrayModel m;
    m.profile.d = require<int>(j, "d", where);
    m.profile.k1 = require<double>(j, "k1", where);
    m.profile.k = require<double>(j, "k", where);

    const auto margin =
        parse_margin(optional_or<std::string>(j, "margin_family", "frechet", where), where);
    const auto minimal_ell = j.contains("minimal_ell")
                                 ? parse_ell(j.at("minimal_ell"), where + ".minimal_ell")
                                 : rv::SlowlyVarying::constant(1.0);

    if (!j.contains("minimal_dynamics") || !j.at("minimal_dynamics").is_array() ||
        j.at("minimal_dynamics").empty())
        throw ConfigError("missing or empty 'minimal_dynamics' in " + where);
    for (const auto& dj : j.at("minimal_dynamics")) {
        cols::ColumnModel col;
        col.marginal = rv::TailSpec{m.profile.k1, minimal_ell};
        col.dynamics = parse_dynamics(dj, where + ".minimal_dynamics");
        col.margin = margin;
        m.minimal_columns.push_back(col);
    }

    cols::ColumnModel bulk;
    bulk.marginal = rv::TailSpec{
        optional_or<double>(j, "bulk_k", m.profile.k, where),
        j.contains("bulk_ell") ? parse_ell(j.at("bulk_ell"), where + ".bulk_ell")
                               : rv::SlowlyVarying::constant(1.0)};
    bulk.dynamics = j.contains("bulk_dynamics")
                        ? parse_dynamics(j.at("bulk_dynamics"), where + ".bulk_dynamics")
                        : cols::Dynamics::iid();
    bulk.margin = margin;
    m.bulk_template = bulk;

    m.coupling = j.contains("coupling")
                     ? parse_coupling(j.at("coupling"), where + ".coupling")
                     : cols::Coupling::independent();
    m.validate();
    return m;
}

json array_to_json(const cols::ArrayModel& m) {
    json j;
    j["d"] = m.profile.d;
    j["k1"] = m.profile.k1;
    j["k"] = m.profile.k;
    j["margin_family"] =
        m.minimal_columns.front().margin == cols::MarginFamily::Frechet ? "frechet" : "pareto";
    j["minimal_ell"] = ell_to_json(m.minimal_columns.front().marginal.ell);
    j["minimal_dynamics"] = json::array();
    for (const auto& c : m.minimal_columns)
        j["minimal_dynamics"].push_back(dynamics_to_json(c.dynamics));
    j["bulk_dynamics"] = dynamics_to_json(m.bulk_template.dynamics);
    j["bulk_ell"] = ell_to_json(m.bulk_template.marginal.ell);
    j["bulk_k"] = m.bulk_template.marginal.k;
    j["coupling"] = coupling_to_json(m.coupling);
    return j;
}

WeightSpec parse_weights(const json& j, const std::string& where) {
    check_keys(j, {"head", "fill"}, where);
    WeightSpec w;
    w.head = require<std::vector<double>>(j, "head", where);
    if (j.contains("fill")) w.fill = j.at("fill").get<double>();
    return w;
}

json weights_to_json(const WeightSpec& w) {
    json j;
    j["head"] = w.head;
    if (w.fill) j["fill"] = *w.fill;
    return j;
}

len::LengthLaw parse_length_law(const json& j, const std::string& where) {
    check_keys(j, {"alpha", "ell", "min_value"}, where);
    len::LengthLaw law;
    law.alpha = require<double>(j, "alpha", where);
    law.ell_tilde = j.contains("ell") ? parse_ell(j.at("ell"), where + ".ell")
                                      : rv::SlowlyVarying::constant(1.0);
    law.min_value = optional_or<std::uint64_t>(j, "min_value", 1, where);
    law.validate();
    return law;
}

json length_law_to_json(const len::LengthLaw& law) {
    json j;
    j["alpha"] = law.alpha;
    j["ell"] = ell_to_json(law.ell_tilde);
    j["min_value"] = law.min_value;
    return j;
}

len::RandomD parse_random_d(const json& j, const std::string& where) {
    check_keys(j, {"support", "probs", "c_bound"}, where);
    len::RandomD rd;
    rd.support = require<std::vector<int>>(j, "support", where);
    rd.probs = require<std::vector<double>>(j, "probs", where);
    rd.c_bound = require<int>(j, "c_bound", where);
    rd.validate();
    return rd;
}

json random_d_to_json(const len::RandomD& rd) {
    json j;
    j["support"] = rd.support;
    j["probs"] = rd.probs;
    j["c_bound"] = rd.c_bound;
    return j;
}

}  // namespace

std::vector<double> WeightSpec::materialize(std::size_t width) const {
    if (head.empty()) throw ConfigError("weights head must be nonempty");
    if (head.size() < width && !fill)
        throw ConfigError("weights cover " + std::to_string(head.size()) +
                          " columns but the scenario materializes " + std::to_string(width) +
                          "; provide 'fill'");
    std::vector<double> z(width);
    for (std::size_t i = 0; i < width; ++i) z[i] = i < head.size() ? head[i] : *fill;
    return z;
}

double ExperimentConfig::chi_pos() const {
    if (signed_mode && signed_mode->chi_pos) return *signed_mode->chi_pos;
    return chi;
}

rv::ThresholdRule ExperimentConfig::rule_pos() const {
    rv::ThresholdRule r;
    r.y = threshold_y;
    r.k1 = threshold_k1 ? *threshold_k1 : array.profile.k1;
    r.ell1 = threshold_ell ? *threshold_ell : array.minimal_columns.front().marginal.ell;
    return r;
}

rv::ThresholdRule ExperimentConfig::rule_neg() const {
    if (!signed_mode) throw ConfigError("negative-side rule requires signed mode");
    rv::ThresholdRule r;
    r.y = threshold_y;
    r.k1 = signed_mode->array_neg.profile.k1;
    r.ell1 = signed_mode->array_neg.minimal_columns.front().marginal.ell;
    return r;
}

ExperimentConfig config_from_json(const json& j) {
    check_keys(j,
               {"seed", "n", "replications", "chi", "array", "weights", "length_law",
                "random_d", "threshold", "signed", "delta_star", "threads", "estimator"},
               "config");
    ExperimentConfig cfg;
    cfg.seed = require<std::uint64_t>(j, "seed", "config");
    cfg.n = require<std::size_t>(j, "n", "config");
    cfg.replications = require<std::size_t>(j, "replications", "config");
    cfg.chi = require<double>(j, "chi", "config");
    cfg.array = parse_array(require<json>(j, "array", "config"), "array");

    if (j.contains("length_law"))
        cfg.length_law = parse_length_law(j.at("length_law"), "length_law");
    if (j.contains("random_d")) cfg.random_d = parse_random_d(j.at("random_d"), "random_d");

    const json& tj = require<json>(j, "threshold", "config");
    check_keys(tj, {"y", "k1", "ell1"}, "threshold");
    cfg.threshold_y = require<double>(tj, "y", "threshold");
    if (tj.contains("k1")) cfg.threshold_k1 = tj.at("k1").get<double>();
    if (tj.contains("ell1")) cfg.threshold_ell = parse_ell(tj.at("ell1"), "threshold.ell1");

    const json& wj = require<json>(j, "weights", "config");
    if (j.contains("signed")) {
        check_keys(wj, {"pos", "neg"}, "weights");
        cfg.weights = parse_weights(require<json>(wj, "pos", "weights"), "weights.pos");

        const json& sj = j.at("signed");
        check_keys(sj, {"chi_neg", "chi_pos", "array_neg", "length_law_neg", "random_d_neg"},
                   "signed");
        SignedSettings s;
        s.chi_neg = require<double>(sj, "chi_neg", "signed");
        if (sj.contains("chi_pos")) s.chi_pos = sj.at("chi_pos").get<double>();
        s.array_neg = parse_array(require<json>(sj, "array_neg", "signed"), "signed.array_neg");
        if (sj.contains("length_law_neg"))
            s.length_law_neg = parse_length_law(sj.at("length_law_neg"), "signed.length_law_neg");
        if (sj.contains("random_d_neg"))
            s.random_d_neg = parse_random_d(sj.at("random_d_neg"), "signed.random_d_neg");
        s.weights_neg = parse_weights(require<json>(wj, "neg", "weights"), "weights.neg");
        cfg.signed_mode = std::move(s);
    } else {
        cfg.weights = parse_weights(wj, "weights");
    }

    if (j.contains("delta_star")) cfg.delta_star = j.at("delta_star").get<double>();
    cfg.threads = optional_or<unsigned>(j, "threads", 1, "config");
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
    if (j.contains("estimator")) {
        const json& ej = j.at("estimator");
        check_keys(ej, {"theta_horizon", "hill_k_order"}, "estimator");
        cfg.estimator.theta_horizon = optional_or<std::size_t>(ej, "theta_horizon", 0, "estimator");
        cfg.estimator.hill_k_order = optional_or<std::size_t>(ej, "hill_k_order", 0, "estimator");
    }

    if (cfg.n == 0) throw ConfigError("n must be >= 1");
    if (cfg.replications == 0) throw ConfigError("replications must be >= 1");
    if (!(cfg.chi > 0.0)) throw ConfigError("chi must be > 0");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("cannot parse " + path + ": " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["n"] = cfg.n;
    j["replications"] = cfg.replications;
    j["chi"] = cfg.chi;
    j["array"] = array_to_json(cfg.array);
    json tj;
    tj["y"] = cfg.threshold_y;
    if (cfg.threshold_k1) tj["k1"] = *cfg.threshold_k1;
    if (cfg.threshold_ell) tj["ell1"] = ell_to_json(*cfg.threshold_ell);
    j["threshold"] = tj;
    if (cfg.length_law) j["length_law"] = length_law_to_json(*cfg.length_law);
    if (cfg.random_d) j["random_d"] = random_d_to_json(*cfg.random_d);
    if (cfg.signed_mode) {
        const auto& s = *cfg.signed_mode;
        json wj;
        wj["pos"] = weights_to_json(cfg.weights);
        wj["neg"] = weights_to_json(s.weights_neg);
        j["weights"] = wj;
        json sj;
        sj["chi_neg"] = s.chi_neg;
        if (s.chi_pos) sj["chi_pos"] = *s.chi_pos;
        sj["array_neg"] = array_to_json(s.array_neg);
        if (s.length_law_neg) sj["length_law_neg"] = length_law_to_json(*s.length_law_neg);
        if (s.random_d_neg) sj["random_d_neg"] = random_d_to_json(*s.random_d_neg);
        j["signed"] = sj;
    } else {
        j["weights"] = weights_to_json(cfg.weights);
    }
    if (cfg.delta_star) j["delta_star"] = *cfg.delta_star;
    j["threads"] = cfg.threads;
    if (cfg.estimator.theta_horizon || cfg.estimator.hill_k_order) {
        json ej;
        if (cfg.estimator.theta_horizon) ej["theta_horizon"] = cfg.estimator.theta_horizon;
        if (cfg.estimator.hill_k_order) ej["hill_k_order"] = cfg.estimator.hill_k_order;
        j["estimator"] = ej;
    }
    return j;
}

}  // namespace randlen::harness
