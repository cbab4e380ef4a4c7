#pragma once

#include <span>
#include <vector>

#include "lsfault/kernel.hpp"

namespace lsfault {

/// Binary training data: n input vectors of a common dimension and +/-1 targets.
struct TrainingSet {
    std::vector<std::vector<double>> inputs;
    std::vector<int> targets;

    std::size_t size() const { return inputs.size(); }
    std::size_t dimension() const { return inputs.empty() ? 0 : inputs.front().size(); }

    /// Throws InvalidInput unless n >= 1, dimensions agree and every target is +/-1.
    void validate() const;
};

/// A trained least-squares SVM classifier.
///
/// The weight vector lives in feature space and is never formed; the model
/// keeps the training inputs and one dual coefficient per input instead.
struct LssvmModel {
    KernelSpec kernel;
    double gamma = 1.0;
    std::vector<double> alphas;
    double bias = 0.0;
    std::vector<std::vector<double>> support_inputs;

    std::size_t dimension() const {
        return support_inputs.empty() ? 0 : support_inputs.front().size();
    }
};

/// Trains by solving the bordered KKT system
///
///     [ 0   1^T             ] [ b ]   [ 0 ]
///     [ 1   Omega + I/gamma ] [ a ] = [ y ]
///
/// with a partial-pivoting LU factorization. Throws NumericalFailure if the
/// relative residual of the solution exceeds 1e-8 or the solution is not finite.
LssvmModel train(const TrainingSet& data, const KernelSpec& kernel, double gamma);

/// sum_k a_k K(x, x_k) + b
double decision_value(const LssvmModel& model, std::span<const double> x);

/// Sign of the decision value; an exact zero maps to +1.
int predict(const LssvmModel& model, std::span<const double> x);

/// Sign convention shared by every binary output.
inline int sign_label(double value) { return value < 0.0 ? -1 : +1; }

/// ||A [b; a] - [0; y]|| / ||[0; y]|| for the model's own KKT system.
/// `targets` must be the labels the model was trained on.
double kkt_residual(const LssvmModel& model, std::span<const int> targets);

}  // namespace lsfault
