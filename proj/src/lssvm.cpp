#include "lsfault/lssvm.hpp"

#include <cmath>
#include <sstream>

#include "lsfault/errors.hpp"

namespace lsfault {

void TrainingSet::validate() const {
    if (inputs.empty()) throw InvalidInput("training set is empty");
    if (inputs.size() != targets.size())
        throw InvalidInput("training set has " + std::to_string(inputs.size()) + " inputs but " +
                           std::to_string(targets.size()) + " targets");
    const std::size_t m = inputs.front().size();
    if (m == 0) throw InvalidInput("training inputs have dimension 0");
    for (const auto& x : inputs)
        if (x.size() != m) throw InvalidInput("training inputs have different dimensions");
    for (int t : targets)
        if (t != 1 && t != -1) throw InvalidInput("training targets must be +1 or -1");
}

namespace {

constexpr double kResidualLimit = 1e-8;

Matrix kkt_matrix(const Matrix& omega, double gamma) {
    const Eigen::Index n = omega.rows();
    Matrix a(n + 1, n + 1);
    a(0, 0) = 0.0;
    a.block(0, 1, 1, n).setOnes();
    a.block(1, 0, n, 1).setOnes();
    a.block(1, 1, n, n) = omega;
    a.block(1, 1, n, n).diagonal().array() += 1.0 / gamma;
    return a;
}

Vector kkt_rhs(std::span<const int> targets) {
    Vector rhs(static_cast<Eigen::Index>(targets.size()) + 1);
    rhs(0) = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i)
        rhs(static_cast<Eigen::Index>(i) + 1) = targets[i];
    return rhs;
}

double relative_residual(const Matrix& a, const Vector& x, const Vector& rhs) {
    return (a * x - rhs).norm() / rhs.norm();
}

void check_dimension(const LssvmModel& model, std::span<const double> x) {
    if (x.size() != model.dimension())
        throw InvalidInput("input has dimension " + std::to_string(x.size()) + ", model expects " +
                           std::to_string(model.dimension()));
}

}  // namespace

LssvmModel train(const TrainingSet& data, const KernelSpec& kernel, double gamma) {
    data.validate();
    kernel.validate();
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidInput("regularization gamma must be finite and > 0");

    const Matrix a = kkt_matrix(gram_matrix(kernel, data.inputs), gamma);
    const Vector rhs = kkt_rhs(data.targets);

    const Eigen::PartialPivLU<Matrix> lu(a);
    const double rcond = lu.rcond();
    Vector x = lu.solve(rhs);
    double residual = relative_residual(a, x, rhs);
    // Iterative refinement recovers accuracy lost on badly scaled systems.
    for (int step = 0; step < 3 && std::isfinite(residual) && residual > 1e-14; ++step) {
        const Vector refined = x + lu.solve(rhs - a * x);
        const double r = relative_residual(a, refined, rhs);
        if (!(r < residual)) break;
        x = refined;
        residual = r;
    }

    if (!x.allFinite() || !(residual <= kResidualLimit)) {
        std::ostringstream msg;
        msg << "LS-SVM system could not be solved (" << describe(kernel) << ", gamma=" << gamma
            << "): relative residual " << residual << ", rcond " << rcond;
        throw NumericalFailure(msg.str(), rcond, residual);
    }

    LssvmModel model;
    model.kernel = kernel;
    model.gamma = gamma;
    model.bias = x(0);
    model.alphas.assign(x.data() + 1, x.data() + x.size());
    model.support_inputs = data.inputs;
    return model;
}

double decision_value(const LssvmModel& model, std::span<const double> x) {
    check_dimension(model, x);
    double sum = 0.0;
    for (std::size_t k = 0; k < model.alphas.size(); ++k)
        sum += model.alphas[k] * kernel_eval(model.kernel, x, model.support_inputs[k]);
    return sum + model.bias;
}

int predict(const LssvmModel& model, std::span<const double> x) {
    return sign_label(decision_value(model, x));
}

double kkt_residual(const LssvmModel& model, std::span<const int> targets) {
    if (targets.size() != model.alphas.size())
        throw InvalidInput("kkt_residual: target count does not match the model");
    const Matrix a = kkt_matrix(gram_matrix(model.kernel, model.support_inputs), model.gamma);
    Vector x(static_cast<Eigen::Index>(model.alphas.size()) + 1);
    x(0) = model.bias;
    for (std::size_t i = 0; i < model.alphas.size(); ++i)
        x(static_cast<Eigen::Index>(i) + 1) = model.alphas[i];
    return relative_residual(a, x, kkt_rhs(targets));
}

}  // namespace lsfault
