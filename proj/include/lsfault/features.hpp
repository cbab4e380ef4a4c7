#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "lsfault/fault_sim.hpp"
#include "lsfault/fault_type.hpp"

namespace lsfault {

/// Post-fault samples taken per phase: a quarter of a 20-sample cycle.
inline constexpr std::size_t kWindowSamples = 5;
inline constexpr std::size_t kFeatureCount = 3 * kWindowSamples;

/// Phase R samples, then Y, then B.
using RawFeatures = std::array<double, kFeatureCount>;

struct FeatureVector {
    RawFeatures values{};
    std::size_t scenario_id = 0;
};

/// Per-feature z-score statistics fitted on training data.
struct NormStats {
    RawFeatures mean{};
    RawFeatures scale{};
};

/// +/-1 targets of the four phase/ground outputs plus the section output.
struct FaultLabel {
    int r = -1, y = -1, b = -1, g = -1;
    int section = +1;
    std::string fault_name = "NONE";

    std::array<int, 4> code() const { return {r, y, b, g}; }
};

/// Samples [fault_index, fault_index + 5) of each phase. Throws InvalidInput
/// if the record ends before that.
RawFeatures extract_window(const ThreePhaseRecord& record);

/// Mean and population standard deviation per feature; a zero deviation is
/// replaced by 1. Needs at least two vectors.
NormStats fit_normalizer(std::span<const RawFeatures> raw);

RawFeatures normalize(const RawFeatures& raw, const NormStats& stats);
RawFeatures denormalize(const RawFeatures& normalized, const NormStats& stats);

/// Output code of the four binary modules for a fault type: +1 where the
/// phase (or ground) is involved. None gives all -1.
std::array<int, 4> targets_from_fault_type(FaultType type);
std::array<int, 4> targets_from_fault_type(std::string_view name);

/// Ground-truth label of a simulated scenario.
FaultLabel label_for(const FaultScenario& scenario);

}  // namespace lsfault
