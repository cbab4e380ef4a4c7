#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lsfault {

enum class KernelFamily { Linear, Polynomial, RBF, MLP };

std::string_view to_string(KernelFamily family);
/// Accepts "linear", "poly"/"polynomial", "rbf", "mlp" (case-insensitive).
KernelFamily parse_kernel_family(std::string_view name);

/// Kernel family plus its hyperparameters. Only the fields relevant to the
/// family are read.
struct KernelSpec {
    KernelFamily family = KernelFamily::RBF;
    int degree = 3;       // Polynomial
    double offset = 1.0;  // Polynomial
    double sigma2 = 1.0;  // RBF: exp(-|x-z|^2 / sigma2)
    double kappa = 1.0;   // MLP: tanh(kappa * x.z + theta)
    double theta = 0.0;   // MLP

    static KernelSpec linear();
    static KernelSpec polynomial(int degree, double offset = 1.0);
    static KernelSpec rbf(double sigma2);
    static KernelSpec mlp(double kappa, double theta);

    /// Throws InvalidInput when the parameters violate the family's domain.
    void validate() const;

    /// Non-Mercer kernels (MLP) may produce an indefinite Gram matrix.
    bool is_mercer() const { return family != KernelFamily::MLP; }

    bool operator==(const KernelSpec&) const = default;
};

std::string describe(const KernelSpec& kernel);

double kernel_eval(const KernelSpec& kernel, std::span<const double> x, std::span<const double> z);

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Gram matrix of the rows of `points`. Upper triangle is evaluated and
/// mirrored, so the result is exactly symmetric.
Matrix gram_matrix(const KernelSpec& kernel, const std::vector<std::vector<double>>& points);

}  // namespace lsfault
