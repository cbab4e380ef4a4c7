#pragma once

#include <stdexcept>
#include <string>

namespace lsfault {

/// Input rejected by a precondition check (dimension mismatch, bad grid, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The KKT system could not be solved to the required accuracy.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, double rcond, double residual)
        : std::runtime_error(what), rcond_(rcond), residual_(residual) {}

    /// Reciprocal condition estimate of the factorized system.
    double rcond() const noexcept { return rcond_; }
    /// Relative residual of the returned solution (NaN when no solution was produced).
    double residual() const noexcept { return residual_; }

private:
    double rcond_;
    double residual_;
};

/// Every cell of a hyperparameter grid failed to train.
class GridSearchFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A binary module cannot be trained on the given dataset (for example a
/// single-class target column). Carries the module name.
class DegenerateDataset : public std::invalid_argument {
public:
    DegenerateDataset(const std::string& module, const std::string& what)
        : std::invalid_argument(module + ": " + what), module_(module) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

}  // namespace lsfault
