#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aggnet {

/// Base of every error raised by the library. `name()` is the stable
/// identifier printed by the CLI on stderr.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual std::string_view name() const noexcept = 0;
};

/// Inputs outside a documented domain (CLI exit code 2).
class InputError : public Error {
public:
    using Error::Error;
};

/// Numerical failures on otherwise valid inputs (CLI exit code 3).
class NumericalError : public Error {
public:
    using Error::Error;
};

#define AGGNET_DEFINE_ERROR(Name, Base)                                      \
    class Name : public Base {                                               \
    public:                                                                  \
        using Base::Base;                                                    \
        std::string_view name() const noexcept override { return #Name; }    \
    }

AGGNET_DEFINE_ERROR(NotSquare, InputError);
AGGNET_DEFINE_ERROR(NonFiniteEntry, InputError);
AGGNET_DEFINE_ERROR(NegativeEntry, InputError);
AGGNET_DEFINE_ERROR(NotStronglyConnected, InputError);
AGGNET_DEFINE_ERROR(NotPrimitive, InputError);
AGGNET_DEFINE_ERROR(InvalidPerturbation, InputError);
AGGNET_DEFINE_ERROR(HypothesisViolation, InputError);
AGGNET_DEFINE_ERROR(DomainError, InputError);
AGGNET_DEFINE_ERROR(DominanceViolated, InputError);
AGGNET_DEFINE_ERROR(ConfigError, InputError);
AGGNET_DEFINE_ERROR(IoError, InputError);

AGGNET_DEFINE_ERROR(SolverDivergence, NumericalError);
AGGNET_DEFINE_ERROR(SingularSystem, NumericalError);
AGGNET_DEFINE_ERROR(SingularPerturbation, NumericalError);
AGGNET_DEFINE_ERROR(NonDifferentiable, NumericalError);
AGGNET_DEFINE_ERROR(BracketFailure, NumericalError);
AGGNET_DEFINE_ERROR(DegenerateSample, NumericalError);
AGGNET_DEFINE_ERROR(MaxStepsExceeded, NumericalError);

#undef AGGNET_DEFINE_ERROR

/// A row of a candidate stochastic matrix does not sum to one.
class RowSumDeviation : public InputError {
public:
    RowSumDeviation(std::size_t row, double row_sum)
        : InputError("row " + std::to_string(row) + " sums to " +
                     std::to_string(row_sum)),
          row_(row),
          row_sum_(row_sum) {}

    std::string_view name() const noexcept override { return "RowSumDeviation"; }
    std::size_t row() const noexcept { return row_; }
    double row_sum() const noexcept { return row_sum_; }
    /// |row_sum - 1|
    double deviation() const noexcept {
        return row_sum_ > 1.0 ? row_sum_ - 1.0 : 1.0 - row_sum_;
    }

private:
    std::size_t row_;
    double row_sum_;
};

}  // namespace aggnet
