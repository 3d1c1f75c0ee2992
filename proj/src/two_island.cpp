#include "aggnet/two_island.hpp"

#include "aggnet/errors.hpp"
#include "aggnet/formulas.hpp"
#include "numeric_search.hpp"

#include <cmath>
#include <string>

namespace aggnet {

namespace {

constexpr double kKink = 1e-12;

void require_limits(double h, double pi) {
    if (!(std::isfinite(h) && h >= 1.0))
        throw DomainError("h must be finite and >= 1, got " + std::to_string(h));
    if (!(std::isfinite(pi) && pi >= 1.0))
        throw DomainError("pi must be finite and >= 1, got " + std::to_string(pi));
}

void require_equal_beta(const TwoIslandEnv& env) {
    env.validate();
    if (!env.equal_beta()) throw DomainError("needs beta1 == beta2");
}

double sign_of_gap(const TwoIslandEnv& env) {
    const double g = delta1(env).signed_gap;
    if (std::abs(g) < kKink) throw NonDifferentiable("signed gap is zero, |.| has a kink");
    return g > 0.0 ? 1.0 : -1.0;
}

double gap_at(const TwoIslandEnv& env, double h, double beta) {
    return formulas::signed_gap_equal(env.rho, env.alpha, beta, h, env.pi);
}

double star_at(const TwoIslandEnv& env, double h, double beta) {
    return std::abs(gap_at(env, h, beta)) - delta0(h, env.pi);
}

// Per-h threshold in beta below which f < 0 (f1) or f > 0 (f2); 0 or 1
// when the sign never changes on (0, 1).
template <class F>
double beta_threshold(F f, bool negative_below) {
    constexpr double lo = 1e-12;
    constexpr double hi = 1.0 - 1e-12;
    auto below = [&](double b) { return negative_below ? f(b) < 0.0 : f(b) > 0.0; };
    if (!below(lo)) return 0.0;
    if (below(hi)) return 1.0;
    return detail::bisect_root(f, lo, hi, 1e-12);
}

}  // namespace

void TwoIslandEnv::validate() const {
    require_limits(h, pi);
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie in (0,1), got " + std::to_string(rho));
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw DomainError("alpha must lie in [0,1], got " + std::to_string(alpha));
    if (!(beta1 > 0.0 && beta1 < 1.0))
        throw DomainError("beta1 must lie in (0,1), got " + std::to_string(beta1));
    if (!(beta2 > 0.0 && beta2 < 1.0))
        throw DomainError("beta2 must lie in (0,1), got " + std::to_string(beta2));
}

RowStochasticMatrix expected_matrix(double h, double pi) {
    require_limits(h, pi);
    Matrix f(2, 2);
    f(0, 0) = h * pi / (h * pi + 1.0);
    f(0, 1) = 1.0 - f(0, 0);
    f(1, 1) = h / (h + pi);
    f(1, 0) = 1.0 - f(1, 1);
    return validate_row_stochastic(f);
}

double consensus_no_ai(double h, double pi) {
    require_limits(h, pi);
    return formulas::no_ai_consensus(h, pi);
}

double delta0(double h, double pi) {
    return std::abs(consensus_no_ai(h, pi) - formulas::benchmark(pi));
}

Delta1 delta1(const TwoIslandEnv& env) {
    env.validate();
    Delta1 d;
    d.p_star_star =
        formulas::p_star_star(env.rho, env.alpha, env.beta1, env.beta2, env.h, env.pi);
    d.signed_gap = d.p_star_star - formulas::benchmark(env.pi);
    d.gap = std::abs(d.signed_gap);
    return d;
}

Delta1 delta1_equal_beta(const TwoIslandEnv& env) {
    require_equal_beta(env);
    Delta1 d;
    d.p_star_star = formulas::p_star_star_equal(env.rho, env.alpha, env.beta1, env.h, env.pi);
    d.signed_gap = d.p_star_star - formulas::benchmark(env.pi);
    d.gap = std::abs(d.signed_gap);
    return d;
}

double delta_star(const TwoIslandEnv& env) { return delta1(env).gap - delta0(env.h, env.pi); }

double d_signed_gap_dh(const TwoIslandEnv& env) {
    require_equal_beta(env);
    return formulas::d_signed_gap_dh(env.rho, env.alpha, env.beta1, env.h, env.pi);
}

double d_signed_gap_dbeta(const TwoIslandEnv& env) {
    require_equal_beta(env);
    return formulas::d_signed_gap_dbeta(env.rho, env.alpha, env.beta1, env.h, env.pi);
}

double d_signed_gap_dalpha(const TwoIslandEnv& env) {
    require_equal_beta(env);
    return formulas::d_signed_gap_dalpha(env.rho, env.beta1, env.h, env.pi);
}

double d_delta1_dh(const TwoIslandEnv& env) { return sign_of_gap(env) * d_signed_gap_dh(env); }
double d_delta1_dbeta(const TwoIslandEnv& env) { return sign_of_gap(env) * d_signed_gap_dbeta(env); }
double d_delta1_dalpha(const TwoIslandEnv& env) { return sign_of_gap(env) * d_signed_gap_dalpha(env); }

const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::Unclassified: return "unclassified";
        case Regime::MajorityAmplifying: return "majority-amplifying";
        case Regime::MinorityLowH: return "minority-low-h";
        case Regime::MinorityMidH: return "minority-mid-h";
        case Regime::MinorityHighH: return "minority-high-h";
    }
    return "unknown";
}

RegimeClassification classify_regime(const TwoIslandEnv& env, const RegimeOptions& opts) {
    require_equal_beta(env);
    if (!(opts.h_max > 1.0) || opts.grid < 3) throw DomainError("bad regime search options");

    RegimeClassification out;
    const double pi = env.pi;
    const double alpha = env.alpha;
    const double beta = env.beta1;

    if (alpha > pi * pi / (pi * pi + 1.0)) {
        out.regime = Regime::MajorityAmplifying;
        return out;
    }
    if (!(alpha < 0.5) || pi == 1.0) return out;

    const std::vector<double> hs = detail::log_grid(1.0 + 1e-9, opts.h_max, opts.grid);

    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = 0; k < hs.size(); k += 10) {
        const double h = hs[k];
        b1 = std::max(b1, beta_threshold(
                              [&](double b) { return -gap_at(env, h, b) - delta0(h, pi); }, true));
        b2 = std::max(b2, beta_threshold([&](double b) { return gap_at(env, h, b); }, false));
    }
    const double cap = (pi - 1.0) / (2.0 * pi - 2.0 * alpha * (pi + 1.0));
    out.thresholds["beta_star_1"] = b1;
    out.thresholds["beta_star_2"] = b2;
    out.thresholds["beta_cap"] = cap;
    out.thresholds["beta_star"] = std::min({b1, b2, cap});
    if (!(beta < out.thresholds["beta_star"])) return out;

    // h0: the root of Q beyond 1 (Q opens downward and Q(1) > 0 here)
    const double qa = beta * (alpha * (pi * pi + 1.0) - pi * pi);
    const double qb = 2.0 * beta * pi * (2.0 * alpha - 1.0);
    const double qc = qa + pi * pi - 1.0;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
        const double r1 = (-qb + std::sqrt(disc)) / (2.0 * qa);
        const double r2 = (-qb - std::sqrt(disc)) / (2.0 * qa);
        const double h0 = std::max(r1, r2);
        if (h0 > 1.0) out.thresholds["h0"] = h0;
    }

    auto roots_of = [&](auto f) {
        std::vector<double> v(hs.size());
        for (std::size_t k = 0; k < hs.size(); ++k) v[k] = f(hs[k]);
        std::vector<double> roots;
        for (std::size_t k : detail::sign_changes(v))
            roots.push_back(detail::bisect_root(f, hs[k], hs[k + 1], opts.root_tol));
        return roots;
    };
    const auto star_roots = roots_of([&](double h) { return star_at(env, h, beta); });
    const auto gap_roots = roots_of([&](double h) { return gap_at(env, h, beta); });
    if (gap_roots.size() == 2) {
        out.thresholds["h_lower_2"] = gap_roots[0];
        out.thresholds["h_upper_2"] = gap_roots[1];
    }
    if (star_roots.size() != 2) return out;

    const double lo = star_roots[0];
    const double hi = star_roots[1];
    out.thresholds["h_lower"] = lo;
    out.thresholds["h_upper"] = hi;
    if (out.thresholds.count("h0")) {
        out.thresholds["h_lower_composed"] = std::min(out.thresholds["h0"], lo);
        out.thresholds["h_upper_composed"] = std::max(out.thresholds["h0"], hi);
    }

    const auto mid = detail::log_grid(lo, hi, 402);
    std::vector<double> slope;
    for (std::size_t k = 1; k + 1 < mid.size(); ++k) {
        const double g = gap_at(env, mid[k], beta);
        const double d = formulas::d_signed_gap_dh(env.rho, alpha, beta, mid[k], pi);
        slope.push_back(g >= 0.0 ? d : -d);
    }
    out.mid_derivative_sign_changes = static_cast<int>(detail::sign_changes(slope).size());

    if (env.h < lo) out.regime = Regime::MinorityLowH;
    else if (env.h <= hi) out.regime = Regime::MinorityMidH;
    else out.regime = Regime::MinorityHighH;
    return out;
}

}  // namespace aggnet
