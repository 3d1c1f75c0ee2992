#pragma once

#include "aggnet/stochastic.hpp"

#include <map>
#include <string>

namespace aggnet {

/// Scalar parameters of the expected two-island environment.
struct TwoIslandEnv {
    double h = 2.0;      ///< homophily p_s / p_d
    double pi = 2.0;     ///< island size ratio n1 / n2
    double rho = 0.5;
    double alpha = 0.5;  ///< training share on the majority island
    double beta1 = 0.5;
    double beta2 = 0.5;

    /// h > 1, pi > 1, rho in (0,1), alpha in [0,1], beta1, beta2 in (0,1).
    /// h = 1 and pi = 1 are let through as limit cases (see boundary()).
    /// Throws DomainError.
    void validate() const;
    /// True when h or pi sits on its limit value 1.
    bool boundary() const noexcept { return h == 1.0 || pi == 1.0; }
    bool equal_beta() const noexcept { return beta1 == beta2; }
};

/// F = [[h pi/(h pi + 1), 1/(h pi + 1)], [pi/(h + pi), h/(h + pi)]].
/// Throws DomainError unless h >= 1 and pi >= 1.
RowStochasticMatrix expected_matrix(double h, double pi);

/// (h pi^2 + pi) / (h pi^2 + h + 2 pi), the no-aggregator consensus.
double consensus_no_ai(double h, double pi);

/// |consensus_no_ai - pi/(pi+1)|. Throws DomainError unless h >= 1, pi >= 1.
double delta0(double h, double pi);

struct Delta1 {
    double p_star_star = 0.0;
    /// p** - pi/(pi+1)
    double signed_gap = 0.0;
    double gap = 0.0;
};

/// Global-aggregator gap from the general (beta1, beta2) closed form.
Delta1 delta1(const TwoIslandEnv& env);
/// Same quantity from the equal-reliance closed form. Throws DomainError
/// when beta1 != beta2.
Delta1 delta1_equal_beta(const TwoIslandEnv& env);

/// delta1 - delta0.
double delta_star(const TwoIslandEnv& env);

/// Analytic partials of the signed gap in an equal-reliance environment.
/// Throw DomainError when beta1 != beta2.
double d_signed_gap_dh(const TwoIslandEnv& env);
double d_signed_gap_dbeta(const TwoIslandEnv& env);
double d_signed_gap_dalpha(const TwoIslandEnv& env);

/// Partials of delta1 = |signed gap|. Throw NonDifferentiable when the
/// signed gap is within 1e-12 of zero.
double d_delta1_dh(const TwoIslandEnv& env);
double d_delta1_dbeta(const TwoIslandEnv& env);
double d_delta1_dalpha(const TwoIslandEnv& env);

enum class Regime {
    Unclassified = 0,
    MajorityAmplifying = 1,
    MinorityLowH = 2,
    MinorityMidH = 3,
    MinorityHighH = 4,
};

const char* to_string(Regime r) noexcept;

struct RegimeClassification {
    Regime regime = Regime::Unclassified;
    /// Named thresholds, present only when defined:
    ///   h_lower, h_upper       sign changes of delta_star in h
    ///   h0                     root of the quadratic governing d(signed gap)/dh
    ///   h_lower_2, h_upper_2   sign changes of the signed gap in h
    ///   h_lower_composed       min(h0, h_lower)
    ///   h_upper_composed       max(h0, h_upper)
    ///   beta_star_1, beta_star_2, beta_cap, beta_star
    std::map<std::string, double> thresholds;
    /// Sign changes of d(delta1)/dh on (h_lower, h_upper); minority regimes only.
    int mid_derivative_sign_changes = 0;
};

struct RegimeOptions {
    double h_max = 1e6;
    int grid = 4000;
    double root_tol = 1e-10;
};

/// Regime of env.h for an equal-reliance environment.
/// Throws DomainError when beta1 != beta2.
RegimeClassification classify_regime(const TwoIslandEnv& env, const RegimeOptions& opts = {});

}  // namespace aggnet
