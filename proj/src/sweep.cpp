#include "aggnet/sweep.hpp"

#include "aggnet/consensus.hpp"
#include "aggnet/dynamics.hpp"
#include "aggnet/errors.hpp"
#include "aggnet/formulas.hpp"
#include "aggnet/local_aggregators.hpp"
#include "aggnet/robust_set.hpp"
#include "aggnet/two_island.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

namespace aggnet {

using nlohmann::json;

namespace {

struct Domain {
    double lo;
    double hi;
    bool lo_open;
    bool hi_open;
    bool integer = false;
};

const std::map<std::string, Domain>& domains() {
    static const std::map<std::string, Domain> d = {
        {"h", {1.0, HUGE_VAL, false, true}},
        {"pi", {1.0, HUGE_VAL, false, true}},
        {"rho", {0.0, 1.0, true, true}},
        {"alpha", {0.0, 1.0, false, false}},
        {"beta", {0.0, 1.0, true, true}},
        {"beta1", {0.0, 1.0, true, true}},
        {"beta2", {0.0, 1.0, true, true}},
        {"b11", {0.0, 1.0, false, true}},
        {"b12", {0.0, 1.0, false, true}},
        {"b21", {0.0, 1.0, false, true}},
        {"b22", {0.0, 1.0, false, true}},
        {"n1", {1.0, 1e6, false, false, true}},
        {"n2", {1.0, 1e6, false, false, true}},
        {"p_s", {0.0, 1.0, true, false}},
        {"p_d", {0.0, 1.0, true, false}},
    };
    return d;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_domain(const std::string& key, double v) {
    const Domain& d = domains().at(key);
    const bool lo_ok = d.lo_open ? v > d.lo : v >= d.lo;
    const bool hi_ok = d.hi_open ? v < d.hi : v <= d.hi;
    if (!std::isfinite(v) || !lo_ok || !hi_ok) {
        std::string bound = std::string(d.lo_open ? "(" : "[") + fmt(d.lo) + ", " +
                            (std::isinf(d.hi) ? std::string("inf") : fmt(d.hi)) +
                            (d.hi_open ? ")" : "]");
        throw ConfigError(key + " = " + fmt(v) + " is outside " + bound);
    }
    if (d.integer && v != std::floor(v)) throw ConfigError(key + " must be an integer");
}

double parse_number(const std::string& key, const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ConfigError("cannot read a number for " + key + " from '" + text + "'");
    return v;
}

ParamRange parse_range(const std::string& key, const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() < 3 || parts.size() > 4)
        throw ConfigError("range for " + key + " must be lo:hi:steps[:log|:linear]");
    ParamRange r;
    r.lo = parse_number(key, parts[0]);
    r.hi = parse_number(key, parts[1]);
    const double steps = parse_number(key, parts[2]);
    if (steps < 0 || steps != std::floor(steps) || steps > 1e7)
        throw ConfigError("steps for " + key + " must be a nonnegative integer");
    r.steps = static_cast<int>(steps);
    if (parts.size() == 4) {
        if (parts[3] == "log") r.log = true;
        else if (parts[3] != "linear") throw ConfigError("scale for " + key + " must be log or linear");
    }
    return r;
}

bool is_symbol(const std::string& key) { return domains().count(key) > 0; }

void store_symbol(SweepConfig& c, const std::string& key, const json& v) {
    if (!is_symbol(key)) throw ConfigError("unknown key '" + key + "'");
    // beta is shorthand for beta1 = beta2; the explicit forms are dropped
    if (key == "beta") {
        c.fixed.erase("beta1"), c.fixed.erase("beta2");
        c.ranges.erase("beta1"), c.ranges.erase("beta2");
    }
    c.fixed.erase(key);
    c.ranges.erase(key);
    if (v.is_number()) {
        c.fixed[key] = v.get<double>();
    } else if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find(':') != std::string::npos) c.ranges[key] = parse_range(key, s);
        else c.fixed[key] = parse_number(key, s);
    } else if (v.is_object()) {
        ParamRange r;
        try {
            r.lo = v.at("lo").get<double>();
            r.hi = v.at("hi").get<double>();
            r.steps = v.at("steps").get<int>();
            const auto scale = v.value("scale", std::string("linear"));
            if (scale != "log" && scale != "linear") throw ConfigError("scale must be log or linear");
            r.log = scale == "log";
        } catch (const json::exception& e) {
            throw ConfigError("bad range object for " + key + ": " + e.what());
        }
        if (r.steps < 0) throw ConfigError("steps for " + key + " must be nonnegative");
        c.ranges[key] = r;
    } else {
        throw ConfigError("value for " + key + " must be a number, range string or range object");
    }
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("T must be a nonempty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    Matrix m(n, static_cast<Eigen::Index>(j[0].size()));
    for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m.cols())
            throw ConfigError("T rows must all have the same length");
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
    return m;
}

Vector vector_from_json(const std::string& key, const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError(key + " must be a nonempty array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(key + " entries must be numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

json range_to_json(const ParamRange& r) {
    return {{"lo", r.lo}, {"hi", r.hi}, {"steps", r.steps}, {"scale", r.log ? "log" : "linear"}};
}

// ---------------------------------------------------------------- run

using Point = std::map<std::string, double>;

struct ModeLayout {
    std::vector<std::string> params;
    std::vector<std::string> outputs;
    std::vector<std::string> required;
};

bool robust_mode(Mode m) { return m == Mode::RobustSet || m == Mode::RhoStar; }

ModeLayout layout(const SweepConfig& c) {
    switch (c.mode) {
        case Mode::Gap:
            return {{"h", "pi", "rho", "alpha", "beta1", "beta2"},
                    {"delta0", "delta1", "delta_star", "p_star_star"},
                    {"h", "pi", "rho", "alpha", "beta1", "beta2"}};
        case Mode::Regime:
            return {{"h", "pi", "rho", "alpha", "beta"},
                    {"regime", "h_lower", "h_upper", "h0", "h_lower_2", "h_upper_2",
                     "h_lower_composed", "h_upper_composed", "beta_star_1", "beta_star_2",
                     "beta_cap", "beta_star", "mid_sign_changes"},
                    {"h", "pi", "rho", "alpha", "beta1", "beta2"}};
        case Mode::RobustSet:
            return {{"pi", "rho", "h_lo", "h_hi", "h_grid"},
                    {"lower", "upper", "measure", "empty"},
                    {"pi", "rho"}};
        case Mode::RhoStar:
            return {{"pi", "h_lo", "h_hi", "h_grid"}, {"rho_star"}, {"pi"}};
        case Mode::LocalCompare:
            return {{"h", "pi", "rho", "b11", "b12", "b21", "b22", "alpha", "beta1", "beta2"},
                    {"p1", "p2", "local_gap1", "local_gap2", "none_gap1", "none_gap2",
                     "improves", "min_margin", "global_gap1", "global_gap2", "worse_topic"},
                    {"h", "pi", "rho", "b11", "b12", "b21", "b22"}};
        case Mode::Simulate:
            return {{"n1", "n2", "p_s", "p_d", "rho", "alpha", "beta1", "beta2"},
                    {"sample_seed", "h", "pi", "predicted_no_ai", "simulated_no_ai",
                     "predicted_ai", "simulated_ai", "steps_no_ai", "steps_ai",
                     "second_eigenvalue"},
                    {"n1", "n2", "p_s", "p_d"}};
        case Mode::Consensus:
            if (c.t)
                return {{"rho"},
                        {"z_formula", "schweitzer", "simulation", "benchmark",
                         "consensus_no_ai", "delta0", "delta1", "delta_star", "condition"},
                        {"rho"}};
            return {{"h", "pi", "rho", "alpha", "beta1", "beta2"},
                    {"z_formula", "schweitzer", "simulation", "benchmark", "consensus_no_ai",
                     "delta0", "delta1", "delta_star", "condition"},
                    {"h", "pi", "rho", "alpha", "beta1", "beta2"}};
    }
    return {};
}

// beta fills beta1/beta2 when they are not given explicitly
Point resolve(Point p) {
    if (p.count("beta")) {
        p.try_emplace("beta1", p["beta"]);
        p.try_emplace("beta2", p["beta"]);
    } else if (p.count("beta1") && p.count("beta2") && p["beta1"] == p["beta2"]) {
        p["beta"] = p["beta1"];
    }
    return p;
}

Cell get(const Point& p, const std::string& k) {
    const auto it = p.find(k);
    if (it == p.end()) return std::nullopt;
    return it->second;
}

TwoIslandEnv env_of(const Point& p) {
    TwoIslandEnv e;
    e.h = p.at("h");
    e.pi = p.at("pi");
    e.rho = p.at("rho");
    e.alpha = p.at("alpha");
    e.beta1 = p.at("beta1");
    e.beta2 = p.at("beta2");
    return e;
}

using Row = std::map<std::string, Cell>;

Row eval_gap(const Point& p) {
    const TwoIslandEnv e = env_of(p);
    const Delta1 d = delta1(e);
    const double d0 = delta0(e.h, e.pi);
    return {{"delta0", d0}, {"delta1", d.gap}, {"delta_star", d.gap - d0}, {"p_star_star", d.p_star_star}};
}

Row eval_regime(const Point& p) {
    const RegimeClassification r = classify_regime(env_of(p));
    Row row{{"regime", static_cast<double>(static_cast<int>(r.regime))}};
    for (const auto& [k, v] : r.thresholds) row[k] = v;
    if (r.regime == Regime::MinorityLowH || r.regime == Regime::MinorityMidH ||
        r.regime == Regime::MinorityHighH)
        row["mid_sign_changes"] = r.mid_derivative_sign_changes;
    return row;
}

RobustQuery robust_query(const SweepConfig& c, const Point& p) {
    const auto it = c.ranges.find("h");
    if (it == c.ranges.end())
        throw ConfigError("robust modes need h as a range lo:hi:grid_size");
    RobustQuery q;
    q.pi = p.at("pi");
    q.h_lo = it->second.lo;
    q.h_hi = it->second.hi;
    q.h_grid_size = it->second.steps;
    q.rho = p.count("rho") ? p.at("rho") : 0.5;
    return q;
}

Row eval_robust(const SweepConfig& c, Point& p) {
    const RobustQuery q = robust_query(c, p);
    p["h_lo"] = q.h_lo, p["h_hi"] = q.h_hi, p["h_grid"] = q.h_grid_size;
    const AlphaInterval a = robust_set(q);
    return {{"lower", a.lower}, {"upper", a.upper}, {"measure", a.measure}, {"empty", a.empty ? 1.0 : 0.0}};
}

Row eval_rho_star(const SweepConfig& c, Point& p) {
    const RobustQuery q = robust_query(c, p);
    p["h_lo"] = q.h_lo, p["h_hi"] = q.h_hi, p["h_grid"] = q.h_grid_size;
    return {{"rho_star", rho_star(q)}};
}

Row eval_local(const Point& p) {
    LocalAggregatorSpec s;
    s.rho = p.at("rho");
    s.b11 = p.at("b11");
    s.b12 = p.at("b12");
    s.b21 = p.at("b21");
    s.b22 = p.at("b22");
    const double h = p.at("h");
    const double pi = p.at("pi");
    const TopicGapVector local = delta2(s, h, pi);
    const TopicGapVector none = delta0_topics(h, pi);
    Row row{{"p1", local.consensus1},       {"p2", local.consensus2},
            {"local_gap1", local.gap1},     {"local_gap2", local.gap2},
            {"none_gap1", none.gap1},       {"none_gap2", none.gap2},
            {"min_margin", std::min(none.gap1 - local.gap1, none.gap2 - local.gap2)}};
    if (s.weakly_dominant()) row["improves"] = check_local_beats_none(s, h, pi).improves ? 1.0 : 0.0;
    if (p.count("alpha") && p.count("beta1") && p.count("beta2")) {
        TwoIslandEnv e = env_of(p);
        const TopicGapVector g = delta1_topics(e);
        row["global_gap1"] = g.gap1;
        row["global_gap2"] = g.gap2;
        if (s.dominant()) row["worse_topic"] = check_global_vs_local(e, s).worse_topic;
    }
    return row;
}

Row eval_simulate(const Point& p, std::uint64_t seed, const std::string& trajectory_path) {
    const int n1 = static_cast<int>(p.at("n1"));
    const int n2 = static_cast<int>(p.at("n2"));
    const double ps = p.at("p_s");
    const double pd = p.at("p_d");
    const TwoIslandSample s = sample_two_island(n1, n2, ps, pd, seed);
    const int n = n1 + n2;
    Vector p0 = Vector::Zero(n);
    p0.head(n1).setOnes();

    const double h = ps / pd;
    const double pi = static_cast<double>(n1) / n2;
    IterationOptions opts;
    opts.spectral_diagnostics = true;
    opts.record_stride = trajectory_path.empty() ? 0 : 1;

    Row row{{"sample_seed", static_cast<double>(seed)}, {"h", h}, {"pi", pi},
            {"predicted_no_ai", formulas::no_ai_consensus(h, pi)}};
    const BeliefTrajectory base = iterate_degroot(s.t, p0, opts);
    row["steps_no_ai"] = static_cast<double>(base.steps);
    if (base.converged) row["simulated_no_ai"] = base.consensus.front();
    if (base.second_eigenvalue) row["second_eigenvalue"] = *base.second_eigenvalue;
    const BeliefTrajectory* saved = &base;

    BeliefTrajectory ai;
    if (p.count("rho") && p.count("alpha") && p.count("beta1") && p.count("beta2")) {
        const double alpha = p.at("alpha");
        const double b1 = p.at("beta1");
        const double b2 = p.at("beta2");
        GlobalAggregatorSpec g;
        g.rho = p.at("rho");
        g.alpha = RowVector(n);
        g.beta = Vector(n);
        for (int i = 0; i < n; ++i) {
            g.alpha(i) = i < n1 ? alpha / n1 : (1.0 - alpha) / n2;
            g.beta(i) = i < n1 ? b1 : b2;
        }
        g.alpha /= g.alpha.sum();
        ai = iterate_global(s.t, g, p0, opts);
        row["steps_ai"] = static_cast<double>(ai.steps);
        if (ai.converged) row["simulated_ai"] = ai.consensus.front();
        row["predicted_ai"] = formulas::p_star_star(g.rho, alpha, b1, b2, h, pi);
        saved = &ai;
    }
    if (!trajectory_path.empty()) {
        std::ofstream f(trajectory_path, std::ios::binary);
        if (!f) throw IoError("cannot write trajectory to " + trajectory_path);
        write_trajectory_csv(f, *saved);
        if (!f) throw IoError("failed writing " + trajectory_path);
    }
    if (!saved->converged)
        throw MaxStepsExceeded("simulation did not reach consensus in " +
                               std::to_string(saved->steps) + " steps");
    return row;
}

Row eval_consensus(const SweepConfig& c, const Point& p) {
    RowStochasticMatrix t = c.t ? validate_row_stochastic(*c.t)
                                : expected_matrix(p.at("h"), p.at("pi"));
    const Eigen::Index n = t.size();
    GlobalAggregatorSpec g;
    g.rho = p.at("rho");
    if (c.t) {
        if (!c.alpha_vector) throw ConfigError("consensus with T needs alpha_vector");
        g.alpha = *c.alpha_vector;
        if (c.beta_vector) g.beta = *c.beta_vector;
        else if (p.count("beta1")) g.beta = Vector::Constant(n, p.at("beta1"));
        else throw ConfigError("consensus with T needs beta_vector or beta");
    } else {
        g.alpha = RowVector(2);
        g.alpha << p.at("alpha"), 1.0 - p.at("alpha");
        g.beta = Vector(2);
        g.beta << p.at("beta1"), p.at("beta2");
    }
    const Vector p0 = c.p0 ? *c.p0 : Vector(Vector::Unit(n, 0));
    if (p0.size() != n) throw ConfigError("p0 length does not match the network");

    const ConsensusResult z = consensus_closed_form(t, g, p0);
    const ConsensusResult s = consensus_schweitzer(t, g, p0);
    const ConsensusResult sim = consensus_simulated(t, g, p0);
    const GapReport gr = gap_report(t, g, p0);
    Row row{{"z_formula", z.value},
            {"schweitzer", s.value},
            {"simulation", sim.value},
            {"benchmark", gr.benchmark},
            {"consensus_no_ai", gr.consensus_no_ai},
            {"delta0", gr.delta0},
            {"delta1", gr.delta1},
            {"delta_star", gr.delta_star}};
    if (z.condition) row["condition"] = *z.condition;
    return row;
}

template <class F>
void parallel_for(std::size_t count, int threads, F body) {
    const std::size_t workers =
        std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

const char* to_string(Mode m) noexcept {
    switch (m) {
        case Mode::Consensus: return "consensus";
        case Mode::Gap: return "gap";
        case Mode::Regime: return "regime";
        case Mode::RobustSet: return "robust-set";
        case Mode::RhoStar: return "rho-star";
        case Mode::LocalCompare: return "local-compare";
        case Mode::Simulate: return "simulate";
    }
    return "unknown";
}

Mode mode_from_string(const std::string& name) {
    for (Mode m : {Mode::Consensus, Mode::Gap, Mode::Regime, Mode::RobustSet, Mode::RhoStar,
                   Mode::LocalCompare, Mode::Simulate})
        if (name == to_string(m)) return m;
    throw ConfigError("unknown mode '" + name + "'");
}

std::vector<double> ParamRange::points() const {
    std::vector<double> v;
    if (steps <= 0) return v;
    if (steps == 1) return {lo};
    v.resize(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        const double f = static_cast<double>(k) / (steps - 1);
        v[static_cast<std::size_t>(k)] =
            log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo);
    }
    v.front() = lo;
    v.back() = hi;
    return v;
}

const std::vector<std::string>& sweep_symbols() {
    static const std::vector<std::string> s = {"h",   "pi",  "rho", "alpha", "beta",
                                               "beta1", "beta2", "b11", "b12", "b21",
                                               "b22", "n1",  "n2",  "p_s",   "p_d"};
    return s;
}

SweepConfig SweepConfig::from_json(const json& j, Mode mode) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    SweepConfig c;
    c.mode = mode;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "mode") {
                if (!v.is_string() || mode_from_string(v.get<std::string>()) != mode)
                    throw ConfigError("config mode does not match the subcommand");
            } else if (key == "seed") {
                if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
                    throw ConfigError("seed must be a nonnegative integer");
                c.seed = v.get<std::uint64_t>();
            } else if (key == "T") {
                c.t = matrix_from_json(v);
            } else if (key == "alpha_vector") {
                c.alpha_vector = vector_from_json(key, v).transpose();
            } else if (key == "beta_vector") {
                c.beta_vector = vector_from_json(key, v);
            } else if (key == "p0") {
                c.p0 = vector_from_json(key, v);
            } else {
                store_symbol(c, key, v);
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return c;
}

SweepConfig SweepConfig::from_file(const std::string& path, Mode mode) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    return from_json(j, mode);
}

void SweepConfig::set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    if (key == "seed") {
        const double s = parse_number(key, value);
        if (s < 0 || s != std::floor(s)) throw ConfigError("seed must be a nonnegative integer");
        seed = static_cast<std::uint64_t>(s);
        return;
    }
    store_symbol(*this, key, json(value));
}

void SweepConfig::validate() const {
    for (const auto& [k, v] : fixed) check_domain(k, v);
    for (const auto& [k, r] : ranges) {
        if (r.steps == 0) continue;
        check_domain(k, r.lo);
        check_domain(k, r.hi);
        if (r.log && !(r.lo > 0.0 && r.hi > 0.0)) throw ConfigError("log range for " + k + " needs positive ends");
    }
}

json SweepConfig::to_json() const {
    json j = json::object();
    j["mode"] = to_string(mode);
    j["seed"] = seed;
    for (const auto& [k, v] : fixed) j[k] = v;
    for (const auto& [k, r] : ranges) j[k] = range_to_json(r);
    if (t) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < t->rows(); ++i) {
            json row = json::array();
            for (Eigen::Index k = 0; k < t->cols(); ++k) row.push_back((*t)(i, k));
            rows.push_back(row);
        }
        j["T"] = rows;
    }
    auto vec = [](const auto& v) {
        json a = json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
        return a;
    };
    if (alpha_vector) j["alpha_vector"] = vec(*alpha_vector);
    if (beta_vector) j["beta_vector"] = vec(*beta_vector);
    if (p0) j["p0"] = vec(*p0);
    return j;
}

ResultTable run(const SweepConfig& config, const RunOptions& opts) {
    config.validate();
    const ModeLayout lay = layout(config);

    ResultTable table;
    table.columns = lay.params;
    table.columns.insert(table.columns.end(), lay.outputs.begin(), lay.outputs.end());
    table.metadata = {{"tool", kToolVersion}, {"seed", config.seed}, {"config", config.to_json()}};

    // swept symbols in canonical order; robust modes read h as the grid
    std::vector<std::string> swept;
    for (const auto& s : sweep_symbols())
        if (config.ranges.count(s) && !(robust_mode(config.mode) && s == "h")) swept.push_back(s);

    std::vector<Point> points{Point(config.fixed.begin(), config.fixed.end())};
    for (const auto& s : swept) {
        std::vector<Point> next;
        for (const auto& base : points)
            for (double v : config.ranges.at(s).points()) {
                Point p = base;
                p[s] = v;
                next.push_back(std::move(p));
            }
        points = std::move(next);
    }
    for (auto& p : points) p = resolve(std::move(p));

    if (!points.empty())
        for (const auto& r : lay.required)
            if (!points.front().count(r)) throw ConfigError("missing value for " + r);
    if (!opts.trajectory_path.empty() && (config.mode != Mode::Simulate || points.size() != 1))
        throw ConfigError("--trajectory needs simulate mode with a single grid point");

    std::vector<std::vector<Cell>> rows(points.size());
    parallel_for(points.size(), opts.threads, [&](std::size_t i) {
        Point p = points[i];
        Row out;
        switch (config.mode) {
            case Mode::Gap: out = eval_gap(p); break;
            case Mode::Regime:
                if (p.at("beta1") != p.at("beta2")) throw ConfigError("regime mode needs beta1 == beta2");
                out = eval_regime(p);
                break;
            case Mode::RobustSet: out = eval_robust(config, p); break;
            case Mode::RhoStar: out = eval_rho_star(config, p); break;
            case Mode::LocalCompare: out = eval_local(p); break;
            case Mode::Simulate:
                out = eval_simulate(p, config.seed + i, opts.trajectory_path);
                break;
            case Mode::Consensus: out = eval_consensus(config, p); break;
        }
        std::vector<Cell> row;
        for (const auto& k : lay.params) row.push_back(get(p, k));
        for (const auto& k : lay.outputs) {
            const auto it = out.find(k);
            row.push_back(it == out.end() ? Cell{} : it->second);
        }
        rows[i] = std::move(row);
    });

    std::vector<std::size_t> key_cols;
    for (std::size_t c = 0; c < lay.params.size(); ++c)
        if (std::find(swept.begin(), swept.end(), lay.params[c]) != swept.end() ||
            (lay.params[c] == "beta" && config.ranges.count("beta")))
            key_cols.push_back(c);
    std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
        for (std::size_t c : key_cols)
            if (a[c] != b[c]) return a[c] < b[c];
        return false;
    });
    table.rows = std::move(rows);
    return table;
}

Format format_from_string(const std::string& name) {
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw ConfigError("format must be csv or json, got '" + name + "'");
}

void emit(const ResultTable& table, Format format, std::ostream& out) {
    if (format == Format::Json) {
        json rows = json::array();
        for (const auto& r : table.rows) {
            json row = json::array();
            for (const Cell& c : r) row.push_back(c ? json(*c) : json(nullptr));
            rows.push_back(std::move(row));
        }
        const json doc = {{"metadata", table.metadata}, {"columns", table.columns}, {"rows", rows}};
        out << doc.dump(2) << '\n';
        return;
    }
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& r : table.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c) out << ',';
            if (r[c]) out << fmt(*r[c]);
        }
        out << '\n';
    }
}

void emit_file(const ResultTable& table, Format format, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    emit(table, format, f);
    f.flush();
    if (!f) throw IoError("failed writing " + path);
}

ResultTable parse_csv(std::istream& in) {
    ResultTable t;
    std::string line;
    if (!std::getline(in, line)) throw IoError("CSV has no header");
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            const auto comma = s.find(',', start);
            parts.push_back(s.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return parts;
    };
    t.columns = split(line);
    while (std::getline(in, line)) {
        const auto parts = split(line);
        if (parts.size() != t.columns.size()) throw IoError("CSV row has the wrong field count");
        std::vector<Cell> row;
        for (const auto& p : parts) {
            if (p.empty()) {
                row.emplace_back();
                continue;
            }
            char* end = nullptr;
            const double v = std::strtod(p.c_str(), &end);
            if (*end != '\0') throw IoError("CSV field '" + p + "' is not a number");
            row.emplace_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace aggnet
