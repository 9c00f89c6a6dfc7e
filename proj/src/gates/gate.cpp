#include "hardbirds/gates.hpp"

#include <array>

namespace hardbirds {

namespace {

constexpr std::array<std::string_view, kPortCount> kPortNames = {"TI", "TL", "TR", "LI", "LO", "RI", "RO",
                                                                 "T",  "L",  "R",  "DI", "DO", "VI", "VO"};
constexpr std::array<std::string_view, 4> kKindNames = {"Selector", "AUT", "Random", "Crossover"};

}  // namespace

std::string_view to_string(GateKind k) { return kKindNames[static_cast<int>(k)]; }
std::string_view to_string(GatePosition p) { return p == kOpen ? "SelectLeft" : "SelectRight"; }
std::string_view to_string(PortName p) { return kPortNames[static_cast<int>(p)]; }

std::string_view to_string(RandomResolution r) {
    switch (r) {
        case RandomResolution::Left: return "Left";
        case RandomResolution::Right: return "Right";
        case RandomResolution::Stuck: return "Stuck";
    }
    return "?";
}

std::optional<GateKind> gate_kind_from(std::string_view s) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
        if (kKindNames[i] == s) return static_cast<GateKind>(i);
    return std::nullopt;
}

std::optional<PortName> port_name_from(std::string_view s) {
    for (std::size_t i = 0; i < kPortNames.size(); ++i)
        if (kPortNames[i] == s) return static_cast<PortName>(i);
    return std::nullopt;
}

bool is_entrance(PortName p) {
    switch (p) {
        case PortName::TI:
        case PortName::LI:
        case PortName::RI:
        case PortName::T:
        case PortName::DI:
        case PortName::VI: return true;
        default: return false;
    }
}

std::vector<PortName> entrances_of(GateKind k) {
    switch (k) {
        case GateKind::Selector: return {PortName::TI, PortName::LI, PortName::RI};
        case GateKind::AUT: return {PortName::TI, PortName::LI};
        case GateKind::Random: return {PortName::T};
        case GateKind::Crossover: return {PortName::DI, PortName::VI};
    }
    return {};
}

std::vector<PortName> exits_of(GateKind k) {
    switch (k) {
        case GateKind::Selector: return {PortName::TL, PortName::TR, PortName::LO, PortName::RO};
        case GateKind::AUT: return {PortName::TL, PortName::TR, PortName::LO};
        case GateKind::Random: return {PortName::L, PortName::R};
        case GateKind::Crossover: return {PortName::DO, PortName::VO};
    }
    return {};
}

bool port_valid_for(GateKind k, PortName p) {
    for (auto q : entrances_of(k))
        if (q == p) return true;
    for (auto q : exits_of(k))
        if (q == p) return true;
    return false;
}

bool is_stateful(GateKind k) { return k == GateKind::Selector || k == GateKind::AUT; }

GateStep step_gate(GateKind kind, std::optional<GatePosition> pos, PortName entrance, std::optional<RandomResolution> res) {
    if (!is_entrance(entrance) || !port_valid_for(kind, entrance))
        throw InvalidArgument(std::string(to_string(entrance)) + " is not an entrance of a " + std::string(to_string(kind)) + " gate");
    if (is_stateful(kind) != pos.has_value())
        throw InvalidArgument(std::string(to_string(kind)) + (pos ? " gates carry no position" : " gates need a position"));
    if ((kind == GateKind::Random) != res.has_value())
        throw InvalidArgument(kind == GateKind::Random ? "Random gates need a resolution" : "only Random gates take a resolution");

    switch (kind) {
        case GateKind::Selector:
            if (entrance == PortName::TI) return {*pos == kOpen ? PortName::TL : PortName::TR, pos};
            if (entrance == PortName::LI) return {PortName::LO, kOpen};
            return {PortName::RO, kClosed};
        case GateKind::AUT:
            if (entrance == PortName::TI) {
                if (*pos == kOpen) return {PortName::TL, kClosed};
                return {PortName::TR, pos};
            }
            return {PortName::LO, kOpen};
        case GateKind::Random:
            switch (*res) {
                case RandomResolution::Left: return {PortName::L, std::nullopt};
                case RandomResolution::Right: return {PortName::R, std::nullopt};
                case RandomResolution::Stuck: return {std::nullopt, std::nullopt};
            }
            break;
        case GateKind::Crossover:
            return {entrance == PortName::DI ? PortName::DO : PortName::VO, std::nullopt};
    }
    throw InvalidArgument("unreachable gate step");
}

}  // namespace hardbirds
