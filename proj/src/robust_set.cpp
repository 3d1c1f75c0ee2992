#include "aggnet/robust_set.hpp"

#include "aggnet/errors.hpp"
#include "aggnet/formulas.hpp"
#include "numeric_search.hpp"

#include <cmath>
#include <string>

namespace aggnet {

namespace {

void require_rho_h(double rho, double h, double pi) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie in (0,1), got " + std::to_string(rho));
    if (!(std::isfinite(pi) && pi > 1.0)) throw DomainError("pi must exceed 1, got " + std::to_string(pi));
    if (!(std::isfinite(h) && h > 1.0)) throw DomainError("h must exceed 1, got " + std::to_string(h));
}

// Extremum of f over the grid, then refined between the neighbours of the
// best grid point. `sign` = +1 minimizes, -1 maximizes.
template <class F>
double grid_extremum(F f, const std::vector<double>& hs, double sign) {
    std::size_t best = 0;
    double val = sign * f(hs[0]);
    for (std::size_t k = 1; k < hs.size(); ++k) {
        const double v = sign * f(hs[k]);
        if (v < val) {
            val = v;
            best = k;
        }
    }
    const double a = hs[best == 0 ? 0 : best - 1];
    const double b = hs[best + 1 == hs.size() ? best : best + 1];
    if (b > a) {
        const auto r = detail::minimize([&](double h) { return sign * f(h); }, a, b);
        val = std::min(val, r.second);
    }
    return sign * val;
}

bool positive(const RobustQuery& q, double rho) {
    RobustQuery r = q;
    r.rho = rho;
    return robust_set(r).measure > 0.0;
}

}  // namespace

void RobustQuery::validate() const {
    if (!(std::isfinite(pi) && pi > 1.0)) throw DomainError("pi must exceed 1");
    if (!(h_lo > 2.0 * pi)) throw DomainError("h_lo must exceed 2 pi");
    if (!(std::isfinite(h_hi) && h_hi > 20.0 * pi)) throw DomainError("h_hi must exceed 20 pi");
    if (!(h_hi > h_lo)) throw DomainError("h_hi must exceed h_lo");
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie in (0,1)");
    if (h_grid_size < 2) throw DomainError("h grid needs at least two points");
}

AlphaInterval AlphaInterval::clipped(double lower, double upper) {
    AlphaInterval a;
    a.lower = lower;
    a.upper = upper;
    const double lo = std::max(lower, 0.0);
    const double hi = std::min(upper, 1.0);
    a.empty = !(lo < hi);
    a.measure = a.empty ? 0.0 : hi - lo;
    return a;
}

AlphaBounds alpha_bounds(const TwoIslandEnv& env) {
    env.validate();
    if (!(env.h > 1.0)) throw DomainError("alpha bounds need h > 1");
    const auto b = formulas::alpha_bounds(env.rho, env.beta1, env.beta2, env.h, env.pi);
    return {b.lower, b.upper};
}

double g_bar(double rho, double h, double pi) {
    require_rho_h(rho, h, pi);
    return formulas::g_bar(rho, h, pi);
}

double g_under(double rho, double h, double pi) {
    require_rho_h(rho, h, pi);
    if (!(h > 2.0 * pi)) throw DomainError("g_under needs h > 2 pi");
    return formulas::g_under(rho, h, pi);
}

double d_g_bar_drho(double rho, double h, double pi) {
    require_rho_h(rho, h, pi);
    return formulas::d_g_bar_drho(rho, h, pi);
}

double d_g_under_drho(double rho, double h, double pi) {
    require_rho_h(rho, h, pi);
    if (!(h > 2.0 * pi)) throw DomainError("g_under needs h > 2 pi");
    return formulas::d_g_under_drho(rho, h, pi);
}

AlphaInterval robust_set(const RobustQuery& q) {
    q.validate();
    const auto hs = detail::log_grid(q.h_lo, q.h_hi, q.h_grid_size);
    const double upper =
        grid_extremum([&](double h) { return formulas::g_bar(q.rho, h, q.pi); }, hs, 1.0);
    const double lower =
        grid_extremum([&](double h) { return formulas::g_under(q.rho, h, q.pi); }, hs, -1.0);
    return AlphaInterval::clipped(lower, upper);
}

double rho_star(const RobustQuery& query, const RhoStarOptions& opts) {
    RobustQuery q = query;
    q.rho = 0.5;
    q.validate();
    if (opts.probes < 2 || !(opts.width > 0.0)) throw DomainError("bad rho* search options");

    // coarse probe: measure must be nondecreasing in rho
    double last = -1.0;
    for (int k = 0; k < opts.probes; ++k) {
        RobustQuery r = q;
        r.rho = 0.5 + 0.499 * k / (opts.probes - 1);
        const double m = robust_set(r).measure;
        if (m < last)
            throw BracketFailure("robust-set measure drops at rho = " + std::to_string(r.rho));
        last = m;
    }

    double lo = 0.5;
    if (positive(q, lo)) throw BracketFailure("robust set already has positive measure at rho = 1/2");
    double hi = 0.0;
    for (int k = 1; k <= 12; ++k) {
        const double rho = 1.0 - std::pow(10.0, -k);
        if (positive(q, rho)) {
            hi = rho;
            break;
        }
        lo = std::max(lo, rho);
    }
    if (hi == 0.0) throw BracketFailure("robust set stays null up to rho = 1 - 1e-12");

    while (hi - lo > opts.width) {
        const double mid = 0.5 * (lo + hi);
        if (positive(q, mid)) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

AlphaInterval pointwise_interval(const TwoIslandEnv& env) {
    const AlphaBounds b = alpha_bounds(env);
    return AlphaInterval::clipped(std::max(0.0, b.lower), b.upper);
}

}  // namespace aggnet
