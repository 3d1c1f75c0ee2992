#include "aggnet/dynamics.hpp"

#include "aggnet/errors.hpp"
#include "aggnet/random.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace aggnet {

namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double spread() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

void require_connected(const RowStochasticMatrix& t) {
    if (!is_strongly_connected(t))
        throw NotStronglyConnected("interaction matrix is not strongly connected");
}

// Shared driver: one belief vector per topic, each paired with an
// aggregator output once `seeded`. `step` advances all topics at once.
template <class Step>
BeliefTrajectory run(std::vector<Vector> p, std::vector<double> a, bool seeded,
                     const IterationOptions& opts, Step step) {
    BeliefTrajectory traj;
    const std::size_t topics = p.size();

    auto snapshot = [&](long t) {
        BeliefState s;
        s.t = t;
        for (const auto& v : p) {
            const auto flat = to_std(v);
            s.p.insert(s.p.end(), flat.begin(), flat.end());
        }
        if (seeded) s.a = a;
        return s;
    };
    auto ranges = [&] {
        std::vector<Range> r(topics);
        for (std::size_t k = 0; k < topics; ++k) {
            for (Eigen::Index i = 0; i < p[k].size(); ++i) r[k].add(p[k](i));
            if (seeded) r[k].add(a[k]);
        }
        return r;
    };
    auto done = [&](const std::vector<Range>& r) {
        return std::all_of(r.begin(), r.end(),
                           [&](const Range& x) { return x.spread() < opts.tol; });
    };

    traj.states.push_back(snapshot(0));
    long t = 0;
    std::vector<Range> r = ranges();
    while (!done(r) && t < opts.max_steps) {
        step(t, p, a);
        seeded = !a.empty();
        ++t;
        r = ranges();
        if (opts.record_stride > 0 && t % opts.record_stride == 0)
            traj.states.push_back(snapshot(t));
    }
    if (traj.states.back().t != t) traj.states.push_back(snapshot(t));

    traj.steps = t;
    traj.converged = done(r);
    for (const auto& x : r) {
        traj.spread.push_back(x.spread());
        if (traj.converged) traj.consensus.push_back(x.mid());
    }
    return traj;
}

std::optional<double> spectral_estimate(const RowStochasticMatrix& m) {
    if (!is_primitive(m)) return std::nullopt;
    return second_eigenvalue_modulus(m, stationary_distribution(m));
}

RowStochasticMatrix local_augmented(const RowStochasticMatrix& f, double rho, int topic,
                                    double bk1, double bk2) {
    Matrix g = Matrix::Zero(3, 3);
    g(0, 0) = rho;
    g(0, topic) = 1.0 - rho;
    const double b[2] = {bk1, bk2};
    for (int j = 0; j < 2; ++j) {
        g(j + 1, 0) = b[j];
        for (int l = 0; l < 2; ++l) g(j + 1, l + 1) = (1.0 - b[j]) * f(j, l);
    }
    return validate_row_stochastic(g, 1e-10);
}

}  // namespace

double BeliefTrajectory::value() const {
    if (!converged || consensus.empty())
        throw MaxStepsExceeded("no consensus after " + std::to_string(steps) + " steps");
    return consensus.front();
}

BeliefTrajectory iterate_degroot(const RowStochasticMatrix& t, const Vector& p0,
                                 const IterationOptions& opts) {
    require_connected(t);
    if (!is_aperiodic(t)) throw NotPrimitive("interaction matrix is periodic");
    if (p0.size() != t.size()) throw DomainError("initial beliefs have the wrong length");

    const Matrix& m = t.matrix();
    auto traj = run({p0}, {}, false, opts,
                    [&](long, std::vector<Vector>& p, std::vector<double>&) {
                        p[0] = m * p[0];
                    });
    if (opts.spectral_diagnostics) traj.second_eigenvalue = spectral_estimate(t);
    return traj;
}

BeliefTrajectory iterate_global(const RowStochasticMatrix& t,
                                const GlobalAggregatorSpec& spec, const Vector& p0,
                                const IterationOptions& opts) {
    require_connected(t);
    spec.validate(t.size());
    if (p0.size() != t.size()) throw DomainError("initial beliefs have the wrong length");

    const Matrix& m = t.matrix();
    const Eigen::ArrayXd keep = 1.0 - spec.beta.array();
    auto traj = run({p0}, {0.0}, false, opts,
                    [&](long step, std::vector<Vector>& p, std::vector<double>& a) {
                        const double trained = spec.alpha * p[0];
                        if (step == 0) {
                            a[0] = trained;
                            p[0] = m * p[0];
                            return;
                        }
                        const double prev = a[0];
                        a[0] = spec.rho * prev + (1.0 - spec.rho) * trained;
                        p[0] = (keep * (m * p[0]).array() + spec.beta.array() * prev).matrix();
                    });
    if (opts.spectral_diagnostics) traj.second_eigenvalue = spectral_estimate(augmented_matrix(t, spec));
    return traj;
}

BeliefTrajectory iterate_local(const RowStochasticMatrix& f,
                               const LocalAggregatorSpec& spec, const Vector& p10,
                               const Vector& p20, const IterationOptions& opts) {
    if (f.size() != 2) throw DomainError("local aggregators run on a 2x2 island matrix");
    require_connected(f);
    spec.validate();
    if (p10.size() != 2 || p20.size() != 2)
        throw DomainError("topic beliefs must have one entry per island");

    const Matrix& m = f.matrix();
    const Eigen::Array2d b[2] = {{spec.b11, spec.b12}, {spec.b21, spec.b22}};
    auto traj = run({p10, p20}, {0.0, 0.0}, false, opts,
                    [&](long step, std::vector<Vector>& p, std::vector<double>& a) {
                        for (int k = 0; k < 2; ++k) {
                            const double trained = p[k](k);
                            if (step == 0) {
                                a[k] = trained;
                                p[k] = m * p[k];
                                continue;
                            }
                            const double prev = a[k];
                            a[k] = spec.rho * prev + (1.0 - spec.rho) * trained;
                            p[k] = ((1.0 - b[k]) * (m * p[k]).array() + b[k] * prev).matrix();
                        }
                    });
    if (opts.spectral_diagnostics) {
        std::optional<double> worst;
        for (int k = 0; k < 2; ++k) {
            const auto g = local_augmented(f, spec.rho, k + 1, b[k](0), b[k](1));
            if (auto e = spectral_estimate(g)) worst = std::max(worst.value_or(0.0), *e);
        }
        traj.second_eigenvalue = worst;
    }
    return traj;
}

RowStochasticMatrix augmented_matrix(const RowStochasticMatrix& t,
                                     const GlobalAggregatorSpec& spec) {
    spec.validate(t.size());
    const Eigen::Index n = t.size();
    Matrix g(n + 1, n + 1);
    g(0, 0) = spec.rho;
    g.block(0, 1, 1, n) = (1.0 - spec.rho) * spec.alpha;
    g.block(1, 0, n, 1) = spec.beta;
    g.block(1, 1, n, n) = (1.0 - spec.beta.array()).matrix().asDiagonal() * t.matrix();
    return validate_row_stochastic(g, 1e-10);
}

TwoIslandSample sample_two_island(int n1, int n2, double p_s, double p_d,
                                  std::uint64_t seed) {
    if (!(n1 >= n2 && n2 >= 1)) throw DomainError("island sizes need n1 >= n2 >= 1");
    const bool complete = p_s == 1.0 && p_d == 1.0;
    if (!complete && !(p_d > 0.0 && p_d < p_s && p_s <= 1.0))
        throw DomainError("link probabilities need 0 < p_d < p_s <= 1");

    const int n = n1 + n2;
    Rng rng(seed);
    std::vector<int> member(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) member[static_cast<std::size_t>(i)] = i < n1 ? 1 : 2;

    std::vector<std::uint8_t> adj(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    Matrix m = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        int degree = 0;
        for (int j = 0; j < n; ++j) {
            bool link = i == j;
            if (!link) {
                const double p = member[static_cast<std::size_t>(i)] ==
                                         member[static_cast<std::size_t>(j)]
                                     ? p_s
                                     : p_d;
                link = rng.uniform() < p;
            }
            if (link) {
                adj[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                    static_cast<std::size_t>(j)] = 1;
                m(i, j) = 1.0;
                ++degree;
            }
        }
        if (degree == 0) throw DegenerateSample("row " + std::to_string(i) + " is empty");
        m.row(i) /= static_cast<double>(degree);
    }
    return {n1, n2, validate_row_stochastic(m, 1e-12), std::move(member), std::move(adj)};
}

void write_trajectory_csv(std::ostream& out, const BeliefTrajectory& traj) {
    std::size_t np = 0;
    std::size_t na = 0;
    for (const auto& s : traj.states) {
        np = std::max(np, s.p.size());
        na = std::max(na, s.a.size());
    }
    out << "t";
    for (std::size_t i = 0; i < np; ++i) out << ",p_" << i + 1;
    if (na == 1) out << ",a";
    else
        for (std::size_t k = 0; k < na; ++k) out << ",a_" << k + 1;
    out << '\n';

    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << ',' << buf;
    };
    for (const auto& s : traj.states) {
        out << s.t;
        for (double v : s.p) put(v);
        for (std::size_t k = 0; k < na; ++k) {
            if (k < s.a.size()) put(s.a[k]);
            else out << ',';
        }
        out << '\n';
    }
}

}  // namespace aggnet
