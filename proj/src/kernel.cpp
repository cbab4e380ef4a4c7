#include "lsfault/kernel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "lsfault/errors.hpp"

namespace lsfault {

std::string_view to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::Linear: return "linear";
        case KernelFamily::Polynomial: return "poly";
        case KernelFamily::RBF: return "rbf";
        case KernelFamily::MLP: return "mlp";
    }
    return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "linear") return KernelFamily::Linear;
    if (lower == "poly" || lower == "polynomial") return KernelFamily::Polynomial;
    if (lower == "rbf") return KernelFamily::RBF;
    if (lower == "mlp") return KernelFamily::MLP;
    throw InvalidInput("unknown kernel family '" + std::string(name) + "'");
}

KernelSpec KernelSpec::linear() {
    KernelSpec k;
    k.family = KernelFamily::Linear;
    return k;
}

KernelSpec KernelSpec::polynomial(int degree, double offset) {
    KernelSpec k;
    k.family = KernelFamily::Polynomial;
    k.degree = degree;
    k.offset = offset;
    k.validate();
    return k;
}

KernelSpec KernelSpec::rbf(double sigma2) {
    KernelSpec k;
    k.family = KernelFamily::RBF;
    k.sigma2 = sigma2;
    k.validate();
    return k;
}

KernelSpec KernelSpec::mlp(double kappa, double theta) {
    KernelSpec k;
    k.family = KernelFamily::MLP;
    k.kappa = kappa;
    k.theta = theta;
    k.validate();
    return k;
}

void KernelSpec::validate() const {
    switch (family) {
        case KernelFamily::Linear:
            return;
        case KernelFamily::Polynomial:
            if (degree < 1) throw InvalidInput("polynomial kernel needs degree >= 1");
            if (!(offset >= 0.0) || !std::isfinite(offset))
                throw InvalidInput("polynomial kernel needs a finite offset >= 0");
            return;
        case KernelFamily::RBF:
            if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
                throw InvalidInput("rbf kernel needs a finite sigma2 > 0");
            return;
        case KernelFamily::MLP:
            if (!std::isfinite(kappa) || !std::isfinite(theta))
                throw InvalidInput("mlp kernel needs finite kappa and theta");
            return;
    }
}

std::string describe(const KernelSpec& kernel) {
    std::ostringstream out;
    out << to_string(kernel.family);
    switch (kernel.family) {
        case KernelFamily::Linear: break;
        case KernelFamily::Polynomial:
            out << "(d=" << kernel.degree << ",c=" << kernel.offset << ")";
            break;
        case KernelFamily::RBF: out << "(sigma2=" << kernel.sigma2 << ")"; break;
        case KernelFamily::MLP:
            out << "(kappa=" << kernel.kappa << ",theta=" << kernel.theta << ")";
            break;
    }
    return out.str();
}

namespace {

double dot(std::span<const double> x, std::span<const double> z) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * z[i];
    return s;
}

}  // namespace

double kernel_eval(const KernelSpec& kernel, std::span<const double> x, std::span<const double> z) {
    if (x.size() != z.size())
        throw InvalidInput("kernel_eval: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                           std::to_string(z.size()) + ")");
    switch (kernel.family) {
        case KernelFamily::Linear:
            return dot(x, z);
        case KernelFamily::Polynomial:
            return std::pow(dot(x, z) + kernel.offset, kernel.degree);
        case KernelFamily::RBF: {
            // Summed in index order; (x_i - z_i)^2 == (z_i - x_i)^2 keeps this symmetric.
            double d2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - z[i];
                d2 += d * d;
            }
            return std::exp(-d2 / kernel.sigma2);
        }
        case KernelFamily::MLP:
            return std::tanh(kernel.kappa * dot(x, z) + kernel.theta);
    }
    return 0.0;
}

Matrix gram_matrix(const KernelSpec& kernel, const std::vector<std::vector<double>>& points) {
    kernel.validate();
    const auto n = static_cast<Eigen::Index>(points.size());
    if (n == 0) throw InvalidInput("gram_matrix: empty point set");
    for (const auto& p : points)
        if (p.size() != points.front().size())
            throw InvalidInput("gram_matrix: inputs have different dimensions");

    Matrix omega(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = kernel_eval(kernel, points[i], points[j]);
            omega(i, j) = v;
            omega(j, i) = v;
        }
    }
    return omega;
}

}  // namespace lsfault
