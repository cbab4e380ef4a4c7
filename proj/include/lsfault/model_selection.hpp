#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lsfault/lssvm.hpp"

namespace lsfault {

using Fold = std::vector<std::size_t>;

/// Shuffles 0..n-1 with a seeded PRNG and deals the indices round-robin into
/// k folds. Fold sizes differ by at most one.
std::vector<Fold> k_fold_split(std::size_t n, std::size_t k, std::uint64_t seed);

/// Class-stratified variant: when both classes have at least k members each
/// class is shuffled and dealt separately (continuing the round-robin across
/// classes), otherwise this is exactly k_fold_split.
std::vector<Fold> stratified_k_fold_split(std::span<const int> labels, std::size_t k,
                                          std::uint64_t seed);

struct CvOutcome {
    double accuracy = 0.0;
    /// Set when some fold failed to train; the whole cell then scores 0.
    bool failed = false;
};

CvOutcome cross_validate(const TrainingSet& data, const KernelSpec& kernel, double gamma,
                         std::size_t folds, std::uint64_t seed);

/// Mean held-out accuracy over the folds; 0 when training failed on any fold.
double cv_accuracy(const TrainingSet& data, const KernelSpec& kernel, double gamma,
                   std::size_t folds, std::uint64_t seed);

struct GridSearchConfig {
    std::vector<double> gamma_grid{0.1, 1, 10, 100, 1000};
    std::vector<double> sigma2_grid{0.1, 0.5, 1, 2, 5, 10};  // RBF
    std::vector<int> degree_grid{2, 3};                      // Polynomial
    double poly_offset = 1.0;
    double mlp_kappa = 1.0;
    double mlp_theta = 0.0;
    std::size_t folds = 5;
    std::uint64_t seed = 42;

    /// Throws InvalidInput for empty or non-increasing grids, folds < 2 or
    /// folds > n (when n is given).
    void validate(std::size_t n = 0) const;
};

struct GridCell {
    double gamma = 0.0;
    KernelSpec kernel;
    double accuracy = 0.0;
    bool failed = false;
};

struct GridSearchResult {
    double best_gamma = 0.0;
    KernelSpec best_kernel;
    double cv_accuracy = 0.0;
    /// Row-major over (gamma, kernel parameter): gamma varies slowest.
    std::vector<GridCell> full_surface;
};

/// The kernel-parameter axis searched for a family: sigma2 for RBF, degree
/// for Polynomial, a single point for Linear and MLP.
std::vector<KernelSpec> kernel_axis(KernelFamily family, const GridSearchConfig& config);

/// Exhaustive search; ties go to the smallest gamma, then the smallest
/// kernel parameter. Throws GridSearchFailure when every cell failed.
GridSearchResult grid_search(const TrainingSet& data, KernelFamily family,
                             const GridSearchConfig& config);

}  // namespace lsfault
