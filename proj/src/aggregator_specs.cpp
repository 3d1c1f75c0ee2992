#include "aggnet/aggregator_specs.hpp"

#include "aggnet/errors.hpp"

#include <cmath>
#include <string>

namespace aggnet {

void GlobalAggregatorSpec::validate(Eigen::Index n) const {
    if (!(rho > 0.0 && rho < 1.0))
        throw HypothesisViolation("rho must lie in (0,1), got " + std::to_string(rho));
    if (alpha.size() != n || beta.size() != n)
        throw HypothesisViolation("alpha and beta must have one entry per agent");
    if (!alpha.allFinite() || !beta.allFinite())
        throw HypothesisViolation("alpha and beta must be finite");
    if ((alpha.array() < 0.0).any())
        throw HypothesisViolation("training weights must be nonnegative");
    if (std::abs(alpha.sum() - 1.0) > 1e-12)
        throw HypothesisViolation("training weights must sum to 1");
    if ((beta.array() < 0.0).any() || (beta.array() >= 1.0).any())
        throw HypothesisViolation("every beta_i must lie in [0,1)");
    if (!(beta.sum() > 0.0))
        throw HypothesisViolation("at least one agent must rely on the aggregator");
}

bool GlobalAggregatorSpec::strictly_interior_beta() const {
    return (beta.array() > 0.0).all() && (beta.array() < 1.0).all();
}

void LocalAggregatorSpec::validate() const {
    if (!(rho > 0.0 && rho < 1.0))
        throw DomainError("rho must lie in (0,1), got " + std::to_string(rho));
    for (double b : {b11, b12, b21, b22})
        if (!(b >= 0.0 && b < 1.0))
            throw DomainError("local reliance weights must lie in [0,1), got " +
                              std::to_string(b));
}

}  // namespace aggnet
