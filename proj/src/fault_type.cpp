#include "lsfault/fault_type.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "lsfault/errors.hpp"

namespace lsfault {

std::string_view fault_name(FaultType type) {
    switch (type) {
        case FaultType::RG: return "R-G";
        case FaultType::YG: return "Y-G";
        case FaultType::BG: return "B-G";
        case FaultType::RYG: return "RY-G";
        case FaultType::RBG: return "RB-G";
        case FaultType::YBG: return "YB-G";
        case FaultType::RYBG: return "RYB-G";
        case FaultType::RY: return "RY";
        case FaultType::RB: return "RB";
        case FaultType::YB: return "YB";
        case FaultType::RYB: return "RYB";
        case FaultType::None: return "NONE";
    }
    return "?";
}

FaultType parse_fault_type(std::string_view name) {
    std::string compact;
    for (char c : name) {
        if (c == '-' || c == ' ') continue;
        compact.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    // "RG" vs "RY": after dropping hyphens a trailing G always means ground.
    static constexpr std::array<FaultType, 12> all{
        FaultType::RG,  FaultType::YG,  FaultType::BG, FaultType::RYG,
        FaultType::RBG, FaultType::YBG, FaultType::RYBG, FaultType::RY,
        FaultType::RB,  FaultType::YB,  FaultType::RYB, FaultType::None};
    for (auto t : all) {
        std::string canon;
        for (char c : fault_name(t))
            if (c != '-') canon.push_back(c);
        if (canon == compact) return t;
    }
    if (compact == "NOFAULT") return FaultType::None;
    throw InvalidInput("unknown fault type '" + std::string(name) + "'");
}

Involvement involvement(FaultType type) {
    switch (type) {
        case FaultType::RG: return {true, false, false, true};
        case FaultType::YG: return {false, true, false, true};
        case FaultType::BG: return {false, false, true, true};
        case FaultType::RYG: return {true, true, false, true};
        case FaultType::RBG: return {true, false, true, true};
        case FaultType::YBG: return {false, true, true, true};
        case FaultType::RYBG: return {true, true, true, true};
        case FaultType::RY: return {true, true, false, false};
        case FaultType::RB: return {true, false, true, false};
        case FaultType::YB: return {false, true, true, false};
        case FaultType::RYB: return {true, true, true, false};
        case FaultType::None: return {};
    }
    return {};
}

int class_index(FaultType type) {
    const auto it = std::find(kClassOrder.begin(), kClassOrder.end(), type);
    return it == kClassOrder.end() ? -1 : static_cast<int>(it - kClassOrder.begin());
}

}  // namespace lsfault
