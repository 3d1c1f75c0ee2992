#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <utility>

namespace aggnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Row-sum tolerance applied when a matrix is validated.
inline constexpr double kRowSumTolerance = 1e-12;

/// Nonnegative square matrix with unit row sums. Only constructible through
/// validate_row_stochastic, so holding one is proof of validity.
class RowStochasticMatrix {
public:
    const Matrix& matrix() const noexcept { return m_; }
    Eigen::Index size() const noexcept { return m_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

private:
    explicit RowStochasticMatrix(Matrix m) : m_(std::move(m)) {}

    friend RowStochasticMatrix validate_row_stochastic(const Matrix&, double, bool);

    Matrix m_;
};

/// Checks `m` is square, finite, nonnegative and has rows summing to one
/// within `tol`. With `renormalize` set, rows are divided by their sums
/// instead of being rejected (rows must still have positive sum).
///
/// Throws NotSquare, NonFiniteEntry, NegativeEntry or RowSumDeviation.
RowStochasticMatrix validate_row_stochastic(const Matrix& m,
                                            double tol = kRowSumTolerance,
                                            bool renormalize = false);

/// True iff the digraph of strictly positive entries is strongly connected.
bool is_strongly_connected(const RowStochasticMatrix& m);

/// Primitivity test for a strongly connected matrix. A positive diagonal
/// entry settles it immediately; otherwise the boolean power M^k with
/// k = (n-1)^2 + 1 (Wielandt) must be entrywise positive.
/// Throws NotStronglyConnected.
bool is_aperiodic(const RowStochasticMatrix& m);

/// Strongly connected and aperiodic.
bool is_primitive(const RowStochasticMatrix& m);

/// Left fixed point of a primitive chain.
struct StationaryDistribution {
    RowVector weights;
    /// max |s M - s| at construction time
    double residual = 0.0;
};

/// Solves (M^T - I) s = 0 with the last equation replaced by sum(s) = 1.
/// Falls back to power iteration when the LU factorization is
/// ill-conditioned. Throws NotPrimitive or SolverDivergence.
StationaryDistribution stationary_distribution(const RowStochasticMatrix& m);

/// Y = sum_k (M^k - 1 s), evaluated as (I - M + 1 s)^{-1} - 1 s.
struct FundamentalMatrix {
    Matrix y;
    /// rank-one limit 1 s
    Matrix limit;
};

/// Throws SingularSystem when I - M + 1 s is numerically singular.
FundamentalMatrix fundamental_matrix(const RowStochasticMatrix& m,
                                     const StationaryDistribution& s);

/// Stationary distribution of T + D through s (I - D Y)^{-1}.
/// Throws InvalidPerturbation when T + D is not a primitive stochastic
/// matrix and SingularPerturbation when I - D Y is singular.
StationaryDistribution schweitzer_perturbation(const RowStochasticMatrix& t,
                                               const Matrix& d);

/// Second-largest eigenvalue modulus, estimated by power iteration on the
/// deflated operator M - 1 s. Used for convergence diagnostics only.
double second_eigenvalue_modulus(const RowStochasticMatrix& m,
                                 const StationaryDistribution& s,
                                 int iterations = 400);

/// Reciprocal condition estimate below which a factorization is treated as
/// singular.
inline constexpr double kSingularRcond = 1e-14;

}  // namespace aggnet
