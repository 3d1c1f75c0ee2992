#pragma once

#include "aggnet/two_island.hpp"

namespace aggnet {

struct RobustQuery {
    double pi = 1.5;
    double h_lo = 4.0;
    double h_hi = 40.0;
    double rho = 0.5;
    int h_grid_size = 2000;

    /// pi > 1, h_lo > 2 pi, h_hi > 20 pi, h_hi > h_lo, rho in (0,1),
    /// h_grid_size >= 2. Throws DomainError.
    void validate() const;
};

struct AlphaInterval {
    double lower = 0.0;
    double upper = 0.0;
    bool empty = true;
    /// max(0, min(upper, 1) - max(lower, 0))
    double measure = 0.0;

    static AlphaInterval clipped(double lower, double upper);
};

struct AlphaBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Exact admissible interval ends for one environment. Throws DomainError.
AlphaBounds alpha_bounds(const TwoIslandEnv& env);

/// Upper bound in the beta1 -> 0 limit. Throws DomainError for h <= 1.
double g_bar(double rho, double h, double pi);
/// Lower bound at (beta1, beta2) = (1, 0). Throws DomainError for h <= 2 pi.
double g_under(double rho, double h, double pi);
double d_g_bar_drho(double rho, double h, double pi);
double d_g_under_drho(double rho, double h, double pi);

/// [0,1] intersected with (sup_h g_under, inf_h g_bar) over [h_lo, h_hi].
/// The extrema come from a log grid refined by a bracketed 1-D search at
/// the best grid point.
AlphaInterval robust_set(const RobustQuery& query);

struct RhoStarOptions {
    /// Bisection stops once the bracket is narrower than this.
    double width = 1e-8;
    /// Coarse probe grid used to check monotonicity before bisecting.
    int probes = 50;
};

/// sup { rho : robust_set(rho) has zero measure }, bisected on the
/// positive-measure predicate. query.rho is ignored.
/// Throws BracketFailure if the predicate is not monotone on the probe grid
/// or never turns true below 1 - 1e-12.
double rho_star(const RobustQuery& query, const RhoStarOptions& opts = {});

/// [max(0, lower), upper] for one environment.
AlphaInterval pointwise_interval(const TwoIslandEnv& env);

}  // namespace aggnet
