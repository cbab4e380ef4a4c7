#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "lsfault/errors.hpp"
#include "lsfault/model_selection.hpp"
#include "oracle.hpp"

using namespace lsfault;

namespace {

std::set<std::size_t> all_indices(const std::vector<Fold>& folds) {
    std::set<std::size_t> out;
    for (const auto& f : folds) out.insert(f.begin(), f.end());
    return out;
}

std::size_t total(const std::vector<Fold>& folds) {
    std::size_t n = 0;
    for (const auto& f : folds) n += f.size();
    return n;
}

TrainingSet separated_1d(std::size_t n) {
    TrainingSet s;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (i % 2 ? 1.0 : -1.0) * (1.0 + 0.37 * static_cast<double>(i));
        s.inputs.push_back({x});
        s.targets.push_back(x > 0 ? 1 : -1);
    }
    return s;
}

// Mean fold accuracy, recomputed from the published folds with direct training.
double manual_cv(const TrainingSet& data, const KernelSpec& k, double gamma, std::size_t folds, std::uint64_t seed) {
    const auto split = stratified_k_fold_split(data.targets, folds, seed);
    double sum = 0;
    for (std::size_t f = 0; f < split.size(); ++f) {
        TrainingSet tr;
        for (std::size_t g = 0; g < split.size(); ++g) {
            if (g == f) continue;
            for (auto i : split[g]) {
                tr.inputs.push_back(data.inputs[i]);
                tr.targets.push_back(data.targets[i]);
            }
        }
        const auto model = train(tr, k, gamma);
        std::size_t ok = 0;
        for (auto i : split[f]) ok += predict(model, data.inputs[i]) == data.targets[i];
        sum += static_cast<double>(ok) / static_cast<double>(split[f].size());
    }
    return sum / static_cast<double>(split.size());
}

}  // namespace

TEST_CASE("k-fold split shapes") {
    const auto a = k_fold_split(4, 2, 99);
    REQUIRE(a.size() == 2);
    CHECK(a[0].size() == 2);
    CHECK(a[1].size() == 2);
    CHECK(all_indices(a) == std::set<std::size_t>{0, 1, 2, 3});

    const auto b = k_fold_split(5, 2, 1);
    std::vector<std::size_t> sizes{b[0].size(), b[1].size()};
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{2, 3});

    for (std::size_t n = 2; n < 40; n += 3)
        for (std::size_t k = 2; k <= std::min<std::size_t>(n, 7); ++k) {
            const auto f = k_fold_split(n, k, n * 31 + k);
            CHECK(f.size() == k);
            CHECK(total(f) == n);
            CHECK(all_indices(f).size() == n);
            std::size_t lo = n, hi = 0;
            for (const auto& fold : f) {
                lo = std::min(lo, fold.size());
                hi = std::max(hi, fold.size());
            }
            CHECK(hi - lo <= 1);
        }
}

TEST_CASE("k-fold split is deterministic per seed") {
    CHECK(k_fold_split(30, 5, 42) == k_fold_split(30, 5, 42));
    CHECK(k_fold_split(30, 5, 42) != k_fold_split(30, 5, 43));
}

TEST_CASE("k-fold split rejects bad fold counts") {
    CHECK_THROWS_AS(k_fold_split(3, 4, 0), InvalidInput);
    CHECK_THROWS_AS(k_fold_split(3, 1, 0), InvalidInput);
    CHECK_THROWS_AS(k_fold_split(0, 2, 0), InvalidInput);
}

TEST_CASE("stratified split keeps class ratios") {
    std::vector<int> labels;
    for (int i = 0; i < 40; ++i) labels.push_back(i < 10 ? 1 : -1);
    const auto f = stratified_k_fold_split(labels, 5, 7);
    CHECK(all_indices(f).size() == 40);
    for (const auto& fold : f) {
        const auto pos = std::count_if(fold.begin(), fold.end(), [&](auto i) { return labels[i] > 0; });
        CHECK(pos == 2);
        CHECK(fold.size() == 8);
    }
    // a class smaller than k falls back to the plain split
    std::vector<int> few{1, -1, -1, -1, -1, -1};
    CHECK(stratified_k_fold_split(few, 3, 5) == k_fold_split(6, 3, 5));
}

TEST_CASE("cross-validation on separable data") {
    const TrainingSet data = separated_1d(20);
    CHECK(cv_accuracy(data, KernelSpec::linear(), 100, 2, 3) == 1.0);
    CHECK(cv_accuracy(data, KernelSpec::linear(), 100, 2, 3) == manual_cv(data, KernelSpec::linear(), 100, 2, 3));
}

TEST_CASE("cross-validation matches a manual recomputation") {
    std::mt19937_64 rng(8);
    TrainingSet data{oracle::random_points(rng, 37, 3), oracle::random_labels(rng, 37)};
    for (std::size_t k : {2, 3, 5, 10}) {
        CHECK(cv_accuracy(data, KernelSpec::rbf(0.5), 10, k, 11) ==
              doctest::Approx(manual_cv(data, KernelSpec::rbf(0.5), 10, k, 11)).epsilon(1e-15));
    }
}

TEST_CASE("random labels give chance-level accuracy") {
    std::mt19937_64 rng(21);
    double sum = 0;
    const int runs = 10;
    for (int r = 0; r < runs; ++r) {
        TrainingSet data{oracle::random_points(rng, 200, 4), oracle::random_labels(rng, 200)};
        sum += cv_accuracy(data, KernelSpec::rbf(1.0), 10, 5, r);
    }
    CHECK(std::fabs(sum / runs - 0.5) <= 0.15);
}

TEST_CASE("leave-one-out on two points is defined") {
    TrainingSet data{{{-1}, {1}}, {-1, 1}};
    const double acc = cv_accuracy(data, KernelSpec::linear(), 1e6, 2, 0);
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
}

TEST_CASE("grid search picks the best cell") {
    std::mt19937_64 rng(13);
    TrainingSet data{oracle::random_points(rng, 60, 2), {}};
    for (const auto& x : data.inputs) data.targets.push_back(x[0] * x[0] + x[1] * x[1] < 0.5 ? 1 : -1);

    GridSearchConfig one;
    one.gamma_grid = {10};
    one.sigma2_grid = {0.5};
    const auto single = grid_search(data, KernelFamily::RBF, one);
    CHECK(single.full_surface.size() == 1);
    CHECK(single.best_gamma == 10);
    CHECK(single.best_kernel.sigma2 == 0.5);

    GridSearchConfig two;
    two.gamma_grid = {0.1};
    two.sigma2_grid = {0.5, 10};
    const auto res = grid_search(data, KernelFamily::RBF, two);
    const double a = cv_accuracy(data, KernelSpec::rbf(0.5), 0.1, two.folds, two.seed);
    const double b = cv_accuracy(data, KernelSpec::rbf(10), 0.1, two.folds, two.seed);
    REQUIRE(a != b);
    CHECK(res.best_kernel.sigma2 == (a > b ? 0.5 : 10));
    CHECK(res.cv_accuracy == std::max(a, b));

    const auto full = grid_search(data, KernelFamily::RBF, GridSearchConfig{});
    CHECK(full.full_surface.size() == 30);
    bool found = false;
    for (const auto& c : full.full_surface) {
        CHECK(c.accuracy <= full.cv_accuracy);
        if (c.gamma == full.best_gamma && c.kernel == full.best_kernel) {
            CHECK(c.accuracy == full.cv_accuracy);
            found = true;
        }
    }
    CHECK(found);
    // gamma varies slowest
    CHECK(full.full_surface[0].gamma == 0.1);
    CHECK(full.full_surface[1].gamma == 0.1);
    CHECK(full.full_surface[6].gamma == 1);
    CHECK(full.full_surface[1].kernel.sigma2 == 0.5);
}

TEST_CASE("grid search ties go to the smallest gamma, then the smallest kernel parameter") {
    const TrainingSet data = separated_1d(20);
    GridSearchConfig cfg;
    cfg.gamma_grid = {1, 10, 100};
    cfg.sigma2_grid = {5, 10, 20};
    const auto res = grid_search(data, KernelFamily::RBF, cfg);
    for (const auto& c : res.full_surface) REQUIRE(c.accuracy == 1.0);
    CHECK(res.best_gamma == 1);
    CHECK(res.best_kernel.sigma2 == 5);

    cfg.degree_grid = {1, 2, 3};
    const auto poly = grid_search(data, KernelFamily::Polynomial, cfg);
    CHECK(poly.full_surface.size() == 9);
    CHECK(poly.best_gamma == 1);
    CHECK(poly.best_kernel.degree == 1);

    const auto lin = grid_search(data, KernelFamily::Linear, cfg);
    CHECK(lin.full_surface.size() == 3);
    CHECK(lin.best_gamma == 1);
}

TEST_CASE("grid search is deterministic") {
    std::mt19937_64 rng(31);
    TrainingSet data{oracle::random_points(rng, 40, 3), oracle::random_labels(rng, 40)};
    const auto a = grid_search(data, KernelFamily::RBF, GridSearchConfig{});
    const auto b = grid_search(data, KernelFamily::RBF, GridSearchConfig{});
    CHECK(a.best_gamma == b.best_gamma);
    CHECK(a.best_kernel == b.best_kernel);
    for (std::size_t i = 0; i < a.full_surface.size(); ++i)
        CHECK(a.full_surface[i].accuracy == b.full_surface[i].accuracy);
}

TEST_CASE("failed cells score zero and a fully failed grid is an error") {
    // duplicated inputs with conflicting labels and no effective regularization
    TrainingSet data;
    for (int i = 0; i < 10; ++i) {
        data.inputs.push_back({1.0});
        data.targets.push_back(i % 2 ? 1 : -1);
    }
    GridSearchConfig cfg;
    cfg.gamma_grid = {1e300};
    cfg.folds = 2;
    const auto out = cross_validate(data, KernelSpec::linear(), 1e300, 2, 0);
    CHECK(out.failed);
    CHECK(out.accuracy == 0.0);
    CHECK_THROWS_AS(grid_search(data, KernelFamily::Linear, cfg), GridSearchFailure);

    cfg.gamma_grid = {1, 1e300};
    const auto res = grid_search(data, KernelFamily::Linear, cfg);
    CHECK(res.best_gamma == 1);
    CHECK(res.full_surface[1].failed);
    CHECK(res.full_surface[1].accuracy == 0.0);
}

TEST_CASE("grid configuration validation") {
    GridSearchConfig c;
    CHECK_NOTHROW(c.validate(10));
    c.gamma_grid = {10, 1};
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c.gamma_grid = {1, 1};
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c.gamma_grid = {};
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = GridSearchConfig{};
    c.sigma2_grid = {-1, 1};
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = GridSearchConfig{};
    c.folds = 1;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c.folds = 11;
    CHECK_THROWS_AS(c.validate(10), InvalidInput);
}
