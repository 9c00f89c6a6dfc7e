#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hardbirds/formula.hpp"
#include "hardbirds/gates.hpp"

namespace hardbirds {

enum class GadgetKind { EQ, UQT, UQF, ClauseAbed, Finish, UQR, Ordering, Choice, RandomGadget, ClauseAbes, Result };
inline constexpr GadgetKind kAllGadgetKinds[] = {GadgetKind::EQ,         GadgetKind::UQT,      GadgetKind::UQF,
                                                 GadgetKind::ClauseAbed, GadgetKind::Finish,   GadgetKind::UQR,
                                                 GadgetKind::Ordering,   GadgetKind::Choice,   GadgetKind::RandomGadget,
                                                 GadgetKind::ClauseAbes, GadgetKind::Result};
std::string_view to_string(GadgetKind k);

struct GadgetParams {
    std::optional<Var> var;          // EQ, UQT, UQF, UQR
    std::vector<Literal> literals;   // clause literals, Choice slot order, RandomGadget leaf order
};

struct GateSpec {
    std::string role;
    GateKind kind;
    std::optional<GatePosition> initial;
};

struct RolePort {
    std::string role;
    PortName port;
};

struct InternalTunnel {
    RolePort from;
    std::variant<RolePort, Sink> to;
};

enum class PortDirection { Input, Output };

struct LabeledPort {
    std::string label;
    RolePort at;
    PortDirection direction;
    bool player_facing = false;
};

struct GadgetBlueprint {
    GadgetKind kind;
    GadgetParams params;
    std::vector<GateSpec> gates;
    std::vector<InternalTunnel> tunnels;
    std::vector<LabeledPort> ports;

    std::size_t role_index(std::string_view role) const;
    /// The single port with this label; throws if absent or ambiguous.
    const LabeledPort& port(std::string_view label) const;
    /// Every port with this label (enable_next_out may sit on several gates).
    std::vector<LabeledPort> ports_named(std::string_view label) const;
    bool has_port(std::string_view label) const;
    std::vector<LabeledPort> inputs() const;
    std::vector<LabeledPort> outputs() const;
    std::vector<LabeledPort> player_facing() const;
    std::size_t stateful_count() const;
};

/// Throws InvalidArgument on wrong literal counts or duplicate Choice literals.
GadgetBlueprint build_gadget(GadgetKind kind, const GadgetParams& params = {});

// Ordering phases: Ready (player may move), PlayerMoved (player may check or hand over),
// OpponentMoved (opponent's formula must be checked before the next player move).
enum class OrderingPhase { Ready, PlayerMoved, OpponentMoved };
std::string_view to_string(OrderingPhase p);

enum class OrderingInput { SP, CP, SO, CO };
std::string_view to_string(OrderingInput i);
/// Reference automaton for the Ordering gadget; nullopt = the bird is blocked.
std::optional<OrderingPhase> ordering_step(OrderingPhase phase, OrderingInput input);

enum class FinishStatus { Enabled, Disabled, Unsolvable };

struct EqState { bool enabled; bool operator==(const EqState&) const = default; };
struct UqtState { bool enabled; bool operator==(const UqtState&) const = default; };
struct UqfState { bool enabled; bool unlocked; bool operator==(const UqfState&) const = default; };
struct ClauseAbedState { bool enabled; bool activated; bool operator==(const ClauseAbedState&) const = default; };
struct FinishState { FinishStatus status; bool operator==(const FinishState&) const = default; };
struct UqrState { bool enabled; bool operator==(const UqrState&) const = default; };
struct OrderingState { OrderingPhase phase; bool operator==(const OrderingState&) const = default; };
struct ChoiceState { std::size_t open_prefix; bool operator==(const ChoiceState&) const = default; };
struct RandomGadgetState { bool operator==(const RandomGadgetState&) const = default; };
struct ClauseAbesState { bool activated; bool operator==(const ClauseAbesState&) const = default; };
struct ResultState { bool open; bool operator==(const ResultState&) const = default; };

using GadgetState = std::variant<EqState, UqtState, UqfState, ClauseAbedState, FinishState, UqrState, OrderingState,
                                 ChoiceState, RandomGadgetState, ClauseAbesState, ResultState>;

/// `positions[i]` is the position of blueprint gate i (ignored for stateless gates).
GadgetState gadget_state(const GadgetBlueprint& b, const std::vector<GatePosition>& positions);
std::string describe(const GadgetState& s);

/// A gadget wired as a circuit on its own: inputs become entrances named by label,
/// outputs become named exits.
struct StandaloneGadget {
    GadgetBlueprint blueprint;
    Circuit circuit;
    std::vector<GateId> gate_of_role;  // blueprint gate index -> GateId

    explicit StandaloneGadget(GadgetBlueprint b);
    GateState state_from(const std::vector<GatePosition>& positions) const;
    std::vector<GatePosition> positions_of(const GateState& s) const;
    GadgetState state_of(const GateState& s) const { return gadget_state(blueprint, positions_of(s)); }
    /// Output label, or "consume" / "pig" / "trapped".
    std::string result_label(const Flight& f) const;
};

struct BehaviorRow {
    std::vector<GatePosition> current;  // stateful gates, blueprint order
    std::string input;
    std::vector<RandomResolution> resolutions;
    std::vector<GatePosition> next;
    std::string output;
};

struct BehaviorTable {
    GadgetBlueprint blueprint;
    std::vector<std::string> stateful_roles;
    std::vector<BehaviorRow> rows;
};

/// Every stateful-gate combination x every input x every resolution sequence.
/// Throws InvalidArgument when the table would exceed 2^20 rows.
BehaviorTable enumerate_gadget_behavior(const GadgetBlueprint& b);
std::string format_behavior_table(const BehaviorTable& t);

}  // namespace hardbirds
