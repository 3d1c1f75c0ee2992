#pragma once

#include "aggnet/aggregator_specs.hpp"
#include "aggnet/two_island.hpp"

namespace aggnet {

/// Per-topic consensus and gap under the unit normalization
/// p1(0) = (1, 0), p2(0) = (0, 1), where the benchmark is (1, 1).
struct TopicGapVector {
    double consensus1 = 0.0;
    double consensus2 = 0.0;
    double gap1 = 0.0;
    double gap2 = 0.0;

    static TopicGapVector from_consensus(double c1, double c2);
    double sum() const noexcept { return gap1 + gap2; }
};

struct TopicConsensus {
    double p1 = 0.0;
    double p2 = 0.0;
};

/// Closed-form topic consensuses. Throws DomainError.
TopicConsensus local_consensus(const LocalAggregatorSpec& spec, double h, double pi);

/// (|p1 - 1|, |p2 - 1|) with local aggregators.
TopicGapVector delta2(const LocalAggregatorSpec& spec, double h, double pi);

/// Topic gaps without any aggregator.
TopicGapVector delta0_topics(double h, double pi);

/// Topic gaps of one global design shared across both topics, each topic
/// solved separately from its own unit initial beliefs.
TopicGapVector delta1_topics(const TwoIslandEnv& env);

struct LocalVsNone {
    /// Componentwise local gap < no-aggregator gap (<= on a boundary).
    bool improves = false;
    /// Dominance held only with equality.
    bool boundary = false;
    TopicGapVector local;
    TopicGapVector none;
    /// min_k (none_k - local_k)
    double min_margin = 0.0;
};

/// Throws DominanceViolated unless b11 >= b12 and b22 >= b21.
LocalVsNone check_local_beats_none(const LocalAggregatorSpec& spec, double h, double pi);

struct GlobalVsLocal {
    /// Topic whose global gap exceeds its local gap by the most; 0 if none.
    int worse_topic = 0;
    TopicGapVector global;
    TopicGapVector local;
};

/// Compares a shared global design (global_env supplies h and pi) with
/// dominant local aggregators. Throws HypothesisViolation when dominance
/// fails or global_env is invalid.
GlobalVsLocal check_global_vs_local(const TwoIslandEnv& global_env,
                                    const LocalAggregatorSpec& spec);

}  // namespace aggnet
