#pragma once

#include "aggnet/errors.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace aggnet::detail {

/// n points log-spaced over [lo, hi], both ends included.
inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int k = 0; k < n; ++k)
        g[static_cast<std::size_t>(k)] = std::exp(a + (b - a) * k / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

/// Root of f in [a, b] given a sign change, bisected until the bracket is
/// narrower than `tol` (or a few ulps, whichever is larger).
template <class F>
double bisect_root(F f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw BracketFailure("no sign change on [" + std::to_string(a) + ", " +
                             std::to_string(b) + "]");
    auto done = [tol](double lo, double hi) {
        return hi - lo <= std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi));
    };
    std::uintmax_t iters = 400;
    const auto r = boost::math::tools::bisect(f, a, b, done, iters);
    return 0.5 * (r.first + r.second);
}

/// Minimizer of f on [a, b] (Brent: golden section with parabolic steps).
template <class F>
std::pair<double, double> minimize(F f, double a, double b) {
    std::uintmax_t iters = 200;
    return boost::math::tools::brent_find_minima(f, a, b, std::numeric_limits<double>::digits / 2,
                                                 iters);
}

/// Indices k with sign(v[k]) != sign(v[k+1]); zeros count as positive.
inline std::vector<std::size_t> sign_changes(const std::vector<double>& v) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
        if ((v[k] >= 0.0) != (v[k + 1] >= 0.0)) out.push_back(k);
    return out;
}

}  // namespace aggnet::detail
