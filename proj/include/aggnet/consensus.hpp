#pragma once

#include "aggnet/aggregator_specs.hpp"
#include "aggnet/dynamics.hpp"
#include "aggnet/stochastic.hpp"

#include <optional>

namespace aggnet {

enum class ConsensusMethod { ZFormula, Schweitzer, Simulation };

const char* to_string(ConsensusMethod m) noexcept;

struct ConsensusResult {
    double value = 0.0;
    /// Row vector w with value = w p(0). A probability vector.
    RowVector influence_weights;
    ConsensusMethod method = ConsensusMethod::ZFormula;
    /// Inverse reciprocal-condition estimate of the main solve, set only
    /// when it exceeds 1e12.
    std::optional<double> condition;
};

/// p** = (alpha + z T) p(0) / (1 + z 1) with
/// z = (1 - rho) alpha (I - (I - Diag beta) T)^{-1}.
/// Requires every beta_i in (0,1) and a primitive T.
/// Throws HypothesisViolation, NotPrimitive.
ConsensusResult consensus_closed_form(const RowStochasticMatrix& t,
                                      const GlobalAggregatorSpec& spec, const Vector& p0);

/// Same limit via the perturbation D = beta alpha - Diag(beta) T:
/// v = s (I - D Y)^{-1}, w = v beta / (1 - rho), weights (w alpha + v T) / (1 + w).
/// Throws HypothesisViolation, NotPrimitive, SingularPerturbation.
ConsensusResult consensus_schweitzer(const RowStochasticMatrix& t,
                                     const GlobalAggregatorSpec& spec, const Vector& p0);

/// Consensus read off iterate_global. Influence weights are filled in by
/// n extra unit-vector runs only when `with_weights` is set.
/// Throws MaxStepsExceeded on non-convergence.
ConsensusResult consensus_simulated(const RowStochasticMatrix& t,
                                    const GlobalAggregatorSpec& spec, const Vector& p0,
                                    const IterationOptions& opts = {},
                                    bool with_weights = false);

/// Mean of the private signals.
double efficient_benchmark(const Vector& p0);

struct GapReport {
    double consensus_no_ai = 0.0;
    double consensus_ai = 0.0;
    double benchmark = 0.0;
    double delta0 = 0.0;
    double delta1 = 0.0;
    /// delta1 - delta0
    double delta_star = 0.0;
};

GapReport gap_report(const RowStochasticMatrix& t, const GlobalAggregatorSpec& spec,
                     const Vector& p0);

}  // namespace aggnet
