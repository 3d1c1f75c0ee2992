#pragma once

#include "aggnet/stochastic.hpp"

namespace aggnet {

/// A single global aggregator attached to an n-agent network.
struct GlobalAggregatorSpec {
    double rho = 0.5;  ///< persistence of the aggregator output, in (0,1)
    RowVector alpha;   ///< training weights, nonnegative, summing to one
    Vector beta;       ///< per-agent reliance on the aggregator, each in [0,1)

    /// Checks the convergence conditions (rho in (0,1), alpha a probability
    /// vector, beta in [0,1) with positive total) against `n` agents.
    /// Throws HypothesisViolation.
    void validate(Eigen::Index n) const;

    /// True iff every beta_i lies strictly inside (0,1), the regime where the
    /// closed-form consensus applies.
    bool strictly_interior_beta() const;
};

/// Two topic-specific aggregators on the two-island network.
/// b_kj is the weight island j places on aggregator k.
struct LocalAggregatorSpec {
    double rho = 0.5;
    double b11 = 0.0;
    double b12 = 0.0;
    double b21 = 0.0;
    double b22 = 0.0;

    /// rho in (0,1) and every b_kj in [0,1). Throws DomainError.
    void validate() const;

    /// Strict dominance b11 > b12 and b22 > b21.
    bool dominant() const noexcept { return b11 > b12 && b22 > b21; }
    /// Dominance holding with at least one equality.
    bool weakly_dominant() const noexcept { return b11 >= b12 && b22 >= b21; }
};

}  // namespace aggnet
