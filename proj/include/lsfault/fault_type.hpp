#pragma once

#include <array>
#include <string_view>

namespace lsfault {

/// Shunt fault types on a three-phase line (phases R, Y, B; G = ground).
///
/// The first ten enumerators are the classes the modular classifier can
/// decode. `RYB` (ungrounded three-phase) can be simulated but its output code
/// is not a decodable class; `None` is the healthy line.
enum class FaultType { RG, YG, BG, RYG, RBG, YBG, RYBG, RY, RB, YB, RYB, None };

/// Decodable fault classes followed by None, in confusion-matrix order.
inline constexpr std::array<FaultType, 11> kClassOrder{
    FaultType::RG,  FaultType::YG,  FaultType::BG, FaultType::RYG,
    FaultType::RBG, FaultType::YBG, FaultType::RYBG, FaultType::RY,
    FaultType::RB,  FaultType::YB,  FaultType::None};

/// The ten fault classes (no None).
inline constexpr std::array<FaultType, 10> kFaultClasses{
    FaultType::RG,  FaultType::YG,  FaultType::BG,   FaultType::RYG, FaultType::RBG,
    FaultType::YBG, FaultType::RYBG, FaultType::RY,  FaultType::RB,  FaultType::YB};

/// Canonical names: "R-G", "RY", "RY-G", "RYB-G", ..., "NONE".
std::string_view fault_name(FaultType type);

/// Accepts canonical names and the fully hyphenated spellings ("R-Y-G",
/// "Y-B", "R-Y-B-G"). Throws InvalidInput for anything else.
FaultType parse_fault_type(std::string_view name);

/// Phase/ground involvement of a fault type.
struct Involvement {
    bool r = false, y = false, b = false, g = false;
    int phase_count() const { return int(r) + int(y) + int(b); }
};

Involvement involvement(FaultType type);

/// Index of a class in kClassOrder, or -1 for RYB.
int class_index(FaultType type);

}  // namespace lsfault
