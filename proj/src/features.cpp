#include "lsfault/features.hpp"

#include <cmath>

#include "lsfault/errors.hpp"

namespace lsfault {

RawFeatures extract_window(const ThreePhaseRecord& record) {
    const std::size_t k = record.fault_index;
    for (const auto& phase : record.samples) {
        if (phase.size() < k + kWindowSamples)
            throw InvalidInput("record has fewer than " + std::to_string(kWindowSamples) +
                               " samples from the fault index on");
    }
    RawFeatures out{};
    for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t i = 0; i < kWindowSamples; ++i)
            out[p * kWindowSamples + i] = record.samples[p][k + i];
    return out;
}

NormStats fit_normalizer(std::span<const RawFeatures> raw) {
    if (raw.size() < 2) throw InvalidInput("normalizer needs at least two vectors");
    const double n = static_cast<double>(raw.size());
    NormStats stats;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        double sum = 0.0;
        for (const auto& v : raw) sum += v[f];
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& v : raw) ss += (v[f] - mean) * (v[f] - mean);
        const double sd = std::sqrt(ss / n);
        stats.mean[f] = mean;
        stats.scale[f] = sd > 0.0 ? sd : 1.0;
    }
    return stats;
}

RawFeatures normalize(const RawFeatures& raw, const NormStats& stats) {
    RawFeatures out{};
    for (std::size_t f = 0; f < kFeatureCount; ++f) out[f] = (raw[f] - stats.mean[f]) / stats.scale[f];
    return out;
}

RawFeatures denormalize(const RawFeatures& normalized, const NormStats& stats) {
    RawFeatures out{};
    for (std::size_t f = 0; f < kFeatureCount; ++f)
        out[f] = stats.mean[f] + normalized[f] * stats.scale[f];
    return out;
}

std::array<int, 4> targets_from_fault_type(FaultType type) {
    const Involvement inv = involvement(type);
    auto pm = [](bool b) { return b ? +1 : -1; };
    return {pm(inv.r), pm(inv.y), pm(inv.b), pm(inv.g)};
}

std::array<int, 4> targets_from_fault_type(std::string_view name) {
    return targets_from_fault_type(parse_fault_type(name));
}

FaultLabel label_for(const FaultScenario& scenario) {
    const auto code = targets_from_fault_type(scenario.fault_type);
    FaultLabel label;
    label.r = code[0];
    label.y = code[1];
    label.b = code[2];
    label.g = code[3];
    label.section = scenario.section();
    label.fault_name = std::string(fault_name(scenario.fault_type));
    return label;
}

}  // namespace lsfault
