#include "aggnet/stochastic.hpp"

#include "aggnet/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace aggnet {

namespace {

using BoolMatrix = std::vector<std::vector<char>>;

BoolMatrix support(const Matrix& m) {
    if (m.rows() <= 0) return {};
    const auto n = static_cast<std::size_t>(m.rows());
    BoolMatrix b(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b[i][j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0;
    return b;
}

BoolMatrix bool_product(const BoolMatrix& a, const BoolMatrix& b) {
    const std::size_t n = a.size();
    BoolMatrix c(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (!a[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) c[i][j] |= b[k][j];
        }
    return c;
}

// Every node reachable from node 0, following edges forward or backward.
bool reaches_all(const Matrix& m, bool transpose) {
    const Eigen::Index n = m.rows();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<Eigen::Index> stack{0};
    seen[0] = 1;
    Eigen::Index count = 1;
    while (!stack.empty()) {
        const Eigen::Index u = stack.back();
        stack.pop_back();
        for (Eigen::Index v = 0; v < n; ++v) {
            const double w = transpose ? m(v, u) : m(u, v);
            if (w > 0.0 && !seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == n;
}

double fixed_point_residual(const Matrix& m, const RowVector& s) {
    return (s * m - s).cwiseAbs().maxCoeff();
}

StationaryDistribution power_iteration(const Matrix& m) {
    const Eigen::Index n = m.rows();
    RowVector s = RowVector::Constant(n, 1.0 / static_cast<double>(n));
    for (int k = 0; k < 1'000'000; ++k) {
        RowVector next = s * m;
        next /= next.sum();
        const double change = (next - s).cwiseAbs().maxCoeff();
        s = std::move(next);
        if (change < 1e-15) break;
    }
    const double r = fixed_point_residual(m, s);
    if (!(r < 1e-10))
        throw SolverDivergence("power iteration residual " + std::to_string(r));
    return {s, r};
}

}  // namespace

RowStochasticMatrix validate_row_stochastic(const Matrix& m, double tol,
                                            bool renormalize) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw NotSquare("matrix is " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
    if (!m.allFinite()) throw NonFiniteEntry("matrix has a non-finite entry");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (m(i, j) < 0.0)
                throw NegativeEntry("entry (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") is negative");

    Matrix out = m;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double sum = m.row(i).sum();
        if (renormalize) {
            if (!(sum > 0.0)) throw RowSumDeviation(static_cast<std::size_t>(i), sum);
            out.row(i) /= sum;
        } else if (std::abs(sum - 1.0) > tol) {
            throw RowSumDeviation(static_cast<std::size_t>(i), sum);
        }
    }
    return RowStochasticMatrix(std::move(out));
}

bool is_strongly_connected(const RowStochasticMatrix& m) {
    return reaches_all(m.matrix(), false) && reaches_all(m.matrix(), true);
}

bool is_aperiodic(const RowStochasticMatrix& m) {
    if (!is_strongly_connected(m))
        throw NotStronglyConnected("aperiodicity is only defined here for strongly connected chains");
    const Matrix& a = m.matrix();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        if (a(i, i) > 0.0) return true;

    const std::size_t n = static_cast<std::size_t>(a.rows());
    std::size_t k = (n - 1) * (n - 1) + 1;
    BoolMatrix base = support(a);
    BoolMatrix acc;
    bool have_acc = false;
    while (k > 0) {
        if (k & 1U) {
            acc = have_acc ? bool_product(acc, base) : base;
            have_acc = true;
        }
        k >>= 1U;
        if (k > 0) base = bool_product(base, base);
    }
    for (const auto& row : acc)
        for (char c : row)
            if (!c) return false;
    return true;
}

bool is_primitive(const RowStochasticMatrix& m) {
    return is_strongly_connected(m) && is_aperiodic(m);
}

StationaryDistribution stationary_distribution(const RowStochasticMatrix& m) {
    if (!is_primitive(m)) throw NotPrimitive("chain is not strongly connected and aperiodic");
    const Matrix& a = m.matrix();
    const Eigen::Index n = a.rows();

    Matrix system = a.transpose() - Matrix::Identity(n, n);
    system.row(n - 1).setOnes();
    Vector rhs = Vector::Zero(n);
    rhs(n - 1) = 1.0;

    Eigen::PartialPivLU<Matrix> lu(system);
    if (lu.rcond() > 1e-12) {
        RowVector s = lu.solve(rhs).transpose();
        // clip round-off negatives before renormalizing
        s = s.cwiseMax(0.0);
        s /= s.sum();
        const double r = fixed_point_residual(a, s);
        if (r < 1e-10) return {s, r};
    }
    return power_iteration(a);
}

FundamentalMatrix fundamental_matrix(const RowStochasticMatrix& m,
                                     const StationaryDistribution& s) {
    const Eigen::Index n = m.size();
    if (s.weights.size() != n)
        throw SingularSystem("stationary distribution has the wrong length");
    Matrix limit = Vector::Ones(n) * s.weights;
    Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) - m.matrix() + limit);
    if (!(lu.rcond() > kSingularRcond))
        throw SingularSystem("I - M + 1s is numerically singular");
    Matrix y = lu.inverse() - limit;
    return {std::move(y), std::move(limit)};
}

StationaryDistribution schweitzer_perturbation(const RowStochasticMatrix& t,
                                               const Matrix& d) {
    if (d.rows() != t.size() || d.cols() != t.size())
        throw InvalidPerturbation("perturbation has the wrong shape");

    const Matrix perturbed = t.matrix() + d;
    RowStochasticMatrix target = [&] {
        try {
            // entries of T + D may carry round-off below zero
            return validate_row_stochastic(perturbed.cwiseMax(0.0), 1e-10);
        } catch (const InputError& e) {
            throw InvalidPerturbation(std::string("T + D is not row-stochastic: ") + e.what());
        }
    }();
    if ((perturbed.array() < -1e-12).any())
        throw InvalidPerturbation("T + D has a negative entry");
    if (!is_primitive(target)) throw InvalidPerturbation("T + D is not primitive");

    const StationaryDistribution s = stationary_distribution(t);
    const FundamentalMatrix fm = fundamental_matrix(t, s);
    const Eigen::Index n = t.size();

    // s (I - DY)^{-1} as the solution of (I - DY)^T x = s^T
    Eigen::PartialPivLU<Matrix> lu((Matrix::Identity(n, n) - d * fm.y).transpose());
    if (!(lu.rcond() > kSingularRcond))
        throw SingularPerturbation("I - DY is numerically singular");
    RowVector shat = lu.solve(s.weights.transpose()).transpose();
    return {shat, fixed_point_residual(target.matrix(), shat)};
}

double second_eigenvalue_modulus(const RowStochasticMatrix& m,
                                 const StationaryDistribution& s, int iterations) {
    const Eigen::Index n = m.size();
    if (n < 2) return 0.0;
    const Matrix& a = m.matrix();
    // deterministic start with no component along the unit eigenvector
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = std::cos(1.0 + 2.0 * static_cast<double>(i));
    x -= Vector::Ones(n) * s.weights.dot(x);

    double log_growth = 0.0;
    int counted = 0;
    const int burn_in = iterations / 2;
    for (int k = 0; k < iterations; ++k) {
        Vector next = a * x;
        next -= Vector::Ones(n) * s.weights.dot(next);
        const double before = x.norm();
        const double after = next.norm();
        if (!(after > 0.0) || !(before > 0.0)) return 0.0;
        if (k >= burn_in) {
            log_growth += std::log(after / before);
            ++counted;
        }
        x = next / after;
    }
    return std::exp(log_growth / counted);
}

}  // namespace aggnet
