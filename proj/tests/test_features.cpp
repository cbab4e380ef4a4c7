#include <cmath>
#include <random>

#include "doctest.h"
#include "lsfault/errors.hpp"
#include "lsfault/features.hpp"

using namespace lsfault;

namespace {

ThreePhaseRecord blank_record(std::size_t length, std::size_t fault_index) {
    ThreePhaseRecord r;
    for (auto& p : r.samples) p.assign(length, 0.0);
    r.fault_index = fault_index;
    return r;
}

}  // namespace

TEST_CASE("window ordering") {
    auto r = blank_record(40, 20);
    for (int i = 0; i < 5; ++i) r.samples[0][20 + i] = i + 1;
    const RawFeatures w = extract_window(r);
    const RawFeatures expect{1, 2, 3, 4, 5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    CHECK(w == expect);

    for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t n = 0; n < 40; ++n) r.samples[p][n] = 100.0 * p + n;
    const RawFeatures v = extract_window(r);
    for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t i = 0; i < 5; ++i) CHECK(v[5 * p + i] == 100.0 * p + 20 + i);
}

TEST_CASE("window uses only samples from the fault index on") {
    auto r = blank_record(30, 20);
    const RawFeatures before = extract_window(r);
    for (auto& p : r.samples) {
        p[19] = 7;  // last pre-fault sample
        p[25] = 9;  // first sample after the window
    }
    CHECK(extract_window(r) == before);
}

TEST_CASE("window needs five post-fault samples") {
    CHECK_THROWS_AS(extract_window(blank_record(30, 26)), InvalidInput);  // T - 4
    CHECK_NOTHROW(extract_window(blank_record(30, 25)));                  // T - 5
    auto r = blank_record(30, 20);
    r.samples[2].resize(24);
    CHECK_THROWS_AS(extract_window(r), InvalidInput);
}

TEST_CASE("normalizer fit") {
    RawFeatures v{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) v[i] = (i % 2 ? -1.0 : 1.0) * (0.5 + i);
    RawFeatures neg = v;
    for (double& x : neg) x = -x;
    const std::vector<RawFeatures> pair{v, neg};
    const NormStats s = fit_normalizer(pair);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        CHECK(s.mean[i] == 0.0);
        CHECK(s.scale[i] == doctest::Approx(std::fabs(v[i])).epsilon(1e-15));
    }

    const std::vector<RawFeatures> same{v, v};
    const NormStats t = fit_normalizer(same);
    for (std::size_t i = 0; i < kFeatureCount; ++i) CHECK(t.scale[i] == 1.0);
    for (double x : normalize(v, t)) CHECK(x == 0.0);

    std::vector<RawFeatures> one{v};
    CHECK_THROWS_AS(fit_normalizer(one), InvalidInput);
    CHECK_THROWS_AS(fit_normalizer(std::vector<RawFeatures>{}), InvalidInput);
}

TEST_CASE("constant columns pass through centered") {
    std::vector<RawFeatures> rows(5);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[r].fill(static_cast<double>(r));
        rows[r][3] = 4.25;
    }
    const NormStats s = fit_normalizer(rows);
    CHECK(s.scale[3] == 1.0);
    CHECK(s.mean[3] == 4.25);
    CHECK(normalize(rows[2], s)[3] == 0.0);
}

TEST_CASE("normalize and denormalize") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g(3.0, 2.0);
    std::vector<RawFeatures> rows(50);
    for (auto& r : rows)
        for (double& x : r) x = g(rng);
    const NormStats s = fit_normalizer(rows);

    for (double x : normalize(s.mean, s)) CHECK(x == 0.0);
    RawFeatures up{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) up[i] = s.mean[i] + s.scale[i];
    for (double x : normalize(up, s)) CHECK(x == doctest::Approx(1.0).epsilon(1e-15));

    for (const auto& r : rows) {
        const RawFeatures back = denormalize(normalize(r, s), s);
        for (std::size_t i = 0; i < kFeatureCount; ++i) CHECK(std::fabs(back[i] - r[i]) <= 1e-12);
    }

    RawFeatures mean{}, sq{};
    for (const auto& r : rows) {
        const RawFeatures z = normalize(r, s);
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            mean[i] += z[i] / rows.size();
            sq[i] += z[i] * z[i] / rows.size();
        }
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        CHECK(std::fabs(mean[i]) <= 1e-10);
        CHECK(std::fabs(std::sqrt(sq[i] - mean[i] * mean[i]) - 1.0) <= 1e-10);
    }
}

TEST_CASE("labels of simulated scenarios") {
    FaultScenario s;
    s.fault_type = FaultType::RBG;
    s.location_pct = 30;
    FaultLabel l = label_for(s);
    CHECK(l.code() == std::array<int, 4>{1, -1, 1, 1});
    CHECK(l.section == 1);
    CHECK(l.fault_name == "RB-G");

    s.fault_type = FaultType::YB;
    s.location_pct = 75;
    l = label_for(s);
    CHECK(l.code() == std::array<int, 4>{-1, 1, 1, -1});
    CHECK(l.section == -1);

    s.location_pct = 50.5;
    CHECK(label_for(s).section == -1);
    s.location_pct = 49.5;
    CHECK(label_for(s).section == 1);
}
