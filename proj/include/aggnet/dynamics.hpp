#pragma once

#include "aggnet/aggregator_specs.hpp"
#include "aggnet/stochastic.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace aggnet {

struct IterationOptions {
    long max_steps = 1'000'000;
    /// Converged once max - min over all beliefs (and aggregator outputs) of
    /// each topic falls below this.
    double tol = 1e-10;
    /// Store every `record_stride`-th state in addition to the first and the
    /// last. 0 keeps only those two; 1 keeps everything.
    long record_stride = 0;
    /// Attach a second-eigenvalue estimate of the iterated chain.
    bool spectral_diagnostics = false;
};

struct BeliefState {
    long t = 0;
    /// Agent (or island) beliefs. Two-topic runs store topic 1 then topic 2.
    std::vector<double> p;
    /// Aggregator outputs: empty before the aggregator is seeded or when
    /// there is none, one entry for a global aggregator, two for local ones.
    std::vector<double> a;
};

struct BeliefTrajectory {
    std::vector<BeliefState> states;
    bool converged = false;
    long steps = 0;
    /// Common limit per topic; empty when not converged.
    std::vector<double> consensus;
    /// Final spread (max - min) per topic.
    std::vector<double> spread;
    std::optional<double> second_eigenvalue;

    /// Single-topic convenience accessor. Throws MaxStepsExceeded if the run
    /// did not converge.
    double value() const;
};

/// p(t+1) = T p(t). Throws NotStronglyConnected / NotPrimitive when T is
/// degenerate; non-convergence is reported through `converged`.
BeliefTrajectory iterate_degroot(const RowStochasticMatrix& t, const Vector& p0,
                                 const IterationOptions& opts = {});

/// Global aggregator with an uninformed seed: a(1) = alpha p(0),
/// p(1) = T p(0), then for t >= 1
///   a(t+1) = rho a(t) + (1 - rho) alpha p(t)
///   p_i(t+1) = (1 - beta_i) (T p(t))_i + beta_i a(t).
BeliefTrajectory iterate_global(const RowStochasticMatrix& t,
                                const GlobalAggregatorSpec& spec, const Vector& p0,
                                const IterationOptions& opts = {});

/// Two topics on the island matrix F with one local aggregator each. Topic k
/// uses the same uninformed seed as the global case: a_k(1) = A_k p_k(0),
/// p_k(1) = F p_k(0); thereafter
///   p_k(t+1) = (I - Diag(B_k)) F p_k(t) + B_k a_k(t)
///   a_k(t+1) = rho a_k(t) + (1 - rho) A_k p_k(t).
BeliefTrajectory iterate_local(const RowStochasticMatrix& f,
                               const LocalAggregatorSpec& spec, const Vector& p10,
                               const Vector& p20, const IterationOptions& opts = {});

/// The (n+1)-state augmented chain [[rho, (1-rho) alpha], [beta, Diag(1-beta) T]].
RowStochasticMatrix augmented_matrix(const RowStochasticMatrix& t,
                                     const GlobalAggregatorSpec& spec);

struct TwoIslandSample {
    int n1 = 0;
    int n2 = 0;
    RowStochasticMatrix t;
    /// 1 for the majority island, 2 for the minority island.
    std::vector<int> memberships;
    /// Realized adjacency (self-links included), row-major.
    std::vector<std::uint8_t> adjacency;
};

/// Directed block-model network: each ordered pair (i, j), i != j, is linked
/// with probability p_s inside an island and p_d across, self-links are
/// always present, and rows are normalized uniformly. Deterministic in
/// `seed`. Throws DomainError unless 0 < p_d < p_s <= 1 (p_d = p_s = 1
/// allowed) and n1 >= n2 >= 1.
TwoIslandSample sample_two_island(int n1, int n2, double p_s, double p_d,
                                  std::uint64_t seed);

/// Trajectory as CSV with columns t, p_1..p_n and a (one aggregator) or
/// a_1, a_2 (two). Values are written with 17 significant digits; states
/// without a seeded aggregator leave the a columns empty.
void write_trajectory_csv(std::ostream& out, const BeliefTrajectory& traj);

}  // namespace aggnet
