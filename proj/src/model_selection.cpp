#include "lsfault/model_selection.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "lsfault/errors.hpp"

namespace lsfault {

namespace {

// Fisher-Yates driven directly by mt19937_64 so the permutation does not
// depend on the standard library's distribution implementations.
void seeded_shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::uint64_t bound = i;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t r;
        do {
            r = rng();
        } while (r >= limit);
        std::swap(v[i - 1], v[static_cast<std::size_t>(r % bound)]);
    }
}

void check_folds(std::size_t n, std::size_t k) {
    if (k < 2) throw InvalidInput("need at least 2 folds");
    if (k > n)
        throw InvalidInput("cannot split " + std::to_string(n) + " samples into " +
                           std::to_string(k) + " folds");
}

TrainingSet subset(const TrainingSet& data, const std::vector<std::size_t>& idx) {
    TrainingSet out;
    out.inputs.reserve(idx.size());
    out.targets.reserve(idx.size());
    for (auto i : idx) {
        out.inputs.push_back(data.inputs[i]);
        out.targets.push_back(data.targets[i]);
    }
    return out;
}

template <typename T>
void check_increasing(const std::vector<T>& grid, const char* name) {
    if (grid.empty()) throw InvalidInput(std::string(name) + " is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i - 1] < grid[i]))
            throw InvalidInput(std::string(name) + " must be strictly increasing");
}

}  // namespace

std::vector<Fold> k_fold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
    check_folds(n, k);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    seeded_shuffle(order, rng);

    std::vector<Fold> folds(k);
    for (std::size_t i = 0; i < n; ++i) folds[i % k].push_back(order[i]);
    return folds;
}

std::vector<Fold> stratified_k_fold_split(std::span<const int> labels, std::size_t k,
                                          std::uint64_t seed) {
    check_folds(labels.size(), k);
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] > 0 ? pos : neg).push_back(i);
    if (pos.size() < k || neg.size() < k) return k_fold_split(labels.size(), k, seed);

    std::mt19937_64 rng(seed);
    seeded_shuffle(pos, rng);
    seeded_shuffle(neg, rng);

    std::vector<Fold> folds(k);
    std::size_t slot = 0;
    for (auto i : pos) folds[slot++ % k].push_back(i);
    for (auto i : neg) folds[slot++ % k].push_back(i);
    return folds;
}

CvOutcome cross_validate(const TrainingSet& data, const KernelSpec& kernel, double gamma,
                         std::size_t folds, std::uint64_t seed) {
    data.validate();
    const auto split = stratified_k_fold_split(data.targets, folds, seed);

    double sum = 0.0;
    for (std::size_t f = 0; f < split.size(); ++f) {
        std::vector<std::size_t> train_idx;
        for (std::size_t g = 0; g < split.size(); ++g)
            if (g != f) train_idx.insert(train_idx.end(), split[g].begin(), split[g].end());
        std::sort(train_idx.begin(), train_idx.end());

        LssvmModel model;
        try {
            model = train(subset(data, train_idx), kernel, gamma);
        } catch (const NumericalFailure&) {
            return {0.0, true};
        }
        std::size_t correct = 0;
        for (auto i : split[f])
            if (predict(model, data.inputs[i]) == data.targets[i]) ++correct;
        sum += static_cast<double>(correct) / static_cast<double>(split[f].size());
    }
    return {sum / static_cast<double>(split.size()), false};
}

double cv_accuracy(const TrainingSet& data, const KernelSpec& kernel, double gamma,
                   std::size_t folds, std::uint64_t seed) {
    return cross_validate(data, kernel, gamma, folds, seed).accuracy;
}

void GridSearchConfig::validate(std::size_t n) const {
    check_increasing(gamma_grid, "gamma grid");
    for (double g : gamma_grid)
        if (!(g > 0.0)) throw InvalidInput("gamma grid values must be > 0");
    check_increasing(sigma2_grid, "sigma2 grid");
    for (double s : sigma2_grid)
        if (!(s > 0.0)) throw InvalidInput("sigma2 grid values must be > 0");
    check_increasing(degree_grid, "degree grid");
    for (int d : degree_grid)
        if (d < 1) throw InvalidInput("degree grid values must be >= 1");
    if (folds < 2) throw InvalidInput("need at least 2 folds");
    if (n != 0 && folds > n)
        throw InvalidInput("more folds (" + std::to_string(folds) + ") than samples (" +
                           std::to_string(n) + ")");
}

std::vector<KernelSpec> kernel_axis(KernelFamily family, const GridSearchConfig& config) {
    std::vector<KernelSpec> axis;
    switch (family) {
        case KernelFamily::Linear:
            axis.push_back(KernelSpec::linear());
            break;
        case KernelFamily::Polynomial:
            for (int d : config.degree_grid)
                axis.push_back(KernelSpec::polynomial(d, config.poly_offset));
            break;
        case KernelFamily::RBF:
            for (double s : config.sigma2_grid) axis.push_back(KernelSpec::rbf(s));
            break;
        case KernelFamily::MLP:
            axis.push_back(KernelSpec::mlp(config.mlp_kappa, config.mlp_theta));
            break;
    }
    return axis;
}

GridSearchResult grid_search(const TrainingSet& data, KernelFamily family,
                             const GridSearchConfig& config) {
    data.validate();
    config.validate(data.size());
    const auto kernels = kernel_axis(family, config);

    GridSearchResult result;
    result.full_surface.reserve(config.gamma_grid.size() * kernels.size());
    for (double gamma : config.gamma_grid) {
        for (const auto& kernel : kernels) {
            const auto cv = cross_validate(data, kernel, gamma, config.folds, config.seed);
            result.full_surface.push_back({gamma, kernel, cv.accuracy, cv.failed});
        }
    }

    // Both axes are increasing and gamma is the outer loop, so the first
    // strict maximum in surface order honours the tie-break rule.
    const GridCell* best = nullptr;
    for (const auto& cell : result.full_surface) {
        if (cell.failed) continue;
        if (best == nullptr || cell.accuracy > best->accuracy) best = &cell;
    }
    if (best == nullptr)
        throw GridSearchFailure("every grid cell failed to train for kernel family " +
                                std::string(to_string(family)));
    result.best_gamma = best->gamma;
    result.best_kernel = best->kernel;
    result.cv_accuracy = best->accuracy;
    return result;
}

}  // namespace lsfault
