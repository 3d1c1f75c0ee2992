#include "aggnet/local_aggregators.hpp"

#include "aggnet/consensus.hpp"
#include "aggnet/errors.hpp"
#include "aggnet/formulas.hpp"

#include <algorithm>
#include <cmath>

namespace aggnet {

namespace {

void require_env(double h, double pi) {
    if (!(std::isfinite(h) && h > 1.0)) throw DomainError("h must exceed 1");
    if (!(std::isfinite(pi) && pi > 1.0)) throw DomainError("pi must exceed 1");
}

}  // namespace

TopicGapVector TopicGapVector::from_consensus(double c1, double c2) {
    return {c1, c2, std::abs(c1 - 1.0), std::abs(c2 - 1.0)};
}

TopicConsensus local_consensus(const LocalAggregatorSpec& spec, double h, double pi) {
    spec.validate();
    require_env(h, pi);
    return {formulas::local_p1(spec.rho, spec.b11, spec.b12, h, pi),
            formulas::local_p2(spec.rho, spec.b21, spec.b22, h, pi)};
}

TopicGapVector delta2(const LocalAggregatorSpec& spec, double h, double pi) {
    const TopicConsensus c = local_consensus(spec, h, pi);
    return TopicGapVector::from_consensus(c.p1, c.p2);
}

TopicGapVector delta0_topics(double h, double pi) {
    require_env(h, pi);
    const double c1 = formulas::no_ai_consensus(h, pi);
    return TopicGapVector::from_consensus(c1, (h + pi) / (h * pi * pi + h + 2.0 * pi));
}

TopicGapVector delta1_topics(const TwoIslandEnv& env) {
    env.validate();
    require_env(env.h, env.pi);
    GlobalAggregatorSpec g;
    g.rho = env.rho;
    g.alpha = RowVector(2);
    g.alpha << env.alpha, 1.0 - env.alpha;
    g.beta = Vector(2);
    g.beta << env.beta1, env.beta2;
    const RowStochasticMatrix f = expected_matrix(env.h, env.pi);
    const double c1 = consensus_closed_form(f, g, Vector::Unit(2, 0)).value;
    const double c2 = consensus_closed_form(f, g, Vector::Unit(2, 1)).value;
    return TopicGapVector::from_consensus(c1, c2);
}

LocalVsNone check_local_beats_none(const LocalAggregatorSpec& spec, double h, double pi) {
    if (!spec.weakly_dominant())
        throw DominanceViolated("local aggregators need b11 >= b12 and b22 >= b21");
    LocalVsNone r;
    r.boundary = !spec.dominant();
    r.local = delta2(spec, h, pi);
    r.none = delta0_topics(h, pi);
    r.min_margin = std::min(r.none.gap1 - r.local.gap1, r.none.gap2 - r.local.gap2);
    r.improves = r.boundary ? r.min_margin >= 0.0 : r.min_margin > 0.0;
    return r;
}

GlobalVsLocal check_global_vs_local(const TwoIslandEnv& global_env,
                                    const LocalAggregatorSpec& spec) {
    if (!spec.dominant())
        throw HypothesisViolation("local aggregators need b11 > b12 and b22 > b21");
    try {
        global_env.validate();
        spec.validate();
    } catch (const DomainError& e) {
        throw HypothesisViolation(e.what());
    }
    GlobalVsLocal r;
    r.global = delta1_topics(global_env);
    r.local = delta2(spec, global_env.h, global_env.pi);
    const double e1 = r.global.gap1 - r.local.gap1;
    const double e2 = r.global.gap2 - r.local.gap2;
    if (e1 > 0.0 || e2 > 0.0) r.worse_topic = e1 >= e2 ? 1 : 2;
    return r;
}

}  // namespace aggnet
