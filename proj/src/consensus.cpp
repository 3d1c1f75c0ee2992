#include "aggnet/consensus.hpp"

#include "aggnet/errors.hpp"

#include <cmath>

namespace aggnet {

namespace {

constexpr double kConditionReport = 1e12;

void require_theorem_hypotheses(const RowStochasticMatrix& t, const GlobalAggregatorSpec& spec,
                                const Vector& p0) {
    spec.validate(t.size());
    if (!spec.strictly_interior_beta())
        throw HypothesisViolation("closed form needs every beta_i in (0,1)");
    if (!is_primitive(t)) throw NotPrimitive("interaction matrix is not primitive");
    if (p0.size() != t.size()) throw DomainError("initial beliefs have the wrong length");
}

std::optional<double> condition_of(double rcond) {
    const double c = rcond > 0.0 ? 1.0 / rcond : HUGE_VAL;
    if (c > kConditionReport) return c;
    return std::nullopt;
}

}  // namespace

const char* to_string(ConsensusMethod m) noexcept {
    switch (m) {
        case ConsensusMethod::ZFormula: return "z-formula";
        case ConsensusMethod::Schweitzer: return "schweitzer";
        case ConsensusMethod::Simulation: return "simulation";
    }
    return "unknown";
}

ConsensusResult consensus_closed_form(const RowStochasticMatrix& t,
                                      const GlobalAggregatorSpec& spec, const Vector& p0) {
    require_theorem_hypotheses(t, spec, p0);
    const Eigen::Index n = t.size();
    const Matrix& m = t.matrix();

    const Matrix system =
        Matrix::Identity(n, n) - (1.0 - spec.beta.array()).matrix().asDiagonal() * m;
    // z = (1 - rho) alpha system^{-1}, solved as system^T z^T = (1 - rho) alpha^T
    Eigen::PartialPivLU<Matrix> lu(system.transpose());
    const RowVector z = lu.solve(((1.0 - spec.rho) * spec.alpha).transpose()).transpose();

    ConsensusResult r;
    r.influence_weights = (spec.alpha + z * m) / (1.0 + z.sum());
    r.value = r.influence_weights.dot(p0.transpose());
    r.method = ConsensusMethod::ZFormula;
    r.condition = condition_of(lu.rcond());
    return r;
}

ConsensusResult consensus_schweitzer(const RowStochasticMatrix& t,
                                     const GlobalAggregatorSpec& spec, const Vector& p0) {
    require_theorem_hypotheses(t, spec, p0);
    const Matrix& m = t.matrix();
    const Matrix d = spec.beta * spec.alpha - spec.beta.asDiagonal() * m;

    const StationaryDistribution v = schweitzer_perturbation(t, d);
    const double w = v.weights.dot(spec.beta.transpose()) / (1.0 - spec.rho);

    ConsensusResult r;
    r.influence_weights = (w * spec.alpha + v.weights * m) / (1.0 + w);
    r.value = r.influence_weights.dot(p0.transpose());
    r.method = ConsensusMethod::Schweitzer;
    return r;
}

ConsensusResult consensus_simulated(const RowStochasticMatrix& t,
                                    const GlobalAggregatorSpec& spec, const Vector& p0,
                                    const IterationOptions& opts, bool with_weights) {
    IterationOptions quiet = opts;
    quiet.record_stride = 0;
    ConsensusResult r;
    r.method = ConsensusMethod::Simulation;
    r.value = iterate_global(t, spec, p0, quiet).value();
    if (with_weights) {
        const Eigen::Index n = t.size();
        r.influence_weights.resize(n);
        for (Eigen::Index i = 0; i < n; ++i)
            r.influence_weights(i) = iterate_global(t, spec, Vector::Unit(n, i), quiet).value();
    }
    return r;
}

double efficient_benchmark(const Vector& p0) {
    if (p0.size() == 0) throw DomainError("no signals to average");
    return p0.mean();
}

GapReport gap_report(const RowStochasticMatrix& t, const GlobalAggregatorSpec& spec,
                     const Vector& p0) {
    GapReport g;
    g.consensus_ai = consensus_closed_form(t, spec, p0).value;
    g.consensus_no_ai = stationary_distribution(t).weights.dot(p0.transpose());
    g.benchmark = efficient_benchmark(p0);
    g.delta0 = std::abs(g.consensus_no_ai - g.benchmark);
    g.delta1 = std::abs(g.consensus_ai - g.benchmark);
    g.delta_star = g.delta1 - g.delta0;
    return g;
}

}  // namespace aggnet
