#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hardbirds/formula.hpp"

namespace hardbirds {

enum class GateKind : std::uint8_t { Selector, AUT, Random, Crossover };

// SelectLeft is "open", SelectRight is "closed".
enum class GatePosition : std::uint8_t { SelectLeft, SelectRight };
inline constexpr GatePosition kOpen = GatePosition::SelectLeft;
inline constexpr GatePosition kClosed = GatePosition::SelectRight;

enum class PortName : std::uint8_t { TI, TL, TR, LI, LO, RI, RO, T, L, R, DI, DO, VI, VO };
inline constexpr int kPortCount = 14;

enum class RandomResolution : std::uint8_t { Left, Right, Stuck };

std::string_view to_string(GateKind k);
std::string_view to_string(GatePosition p);
std::string_view to_string(PortName p);
std::string_view to_string(RandomResolution r);
std::optional<GateKind> gate_kind_from(std::string_view s);
std::optional<PortName> port_name_from(std::string_view s);

bool is_entrance(PortName p);
bool port_valid_for(GateKind k, PortName p);
bool is_stateful(GateKind k);
std::vector<PortName> entrances_of(GateKind k);
std::vector<PortName> exits_of(GateKind k);

class CircuitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GateStep {
    std::optional<PortName> exit;          // nullopt: the bird stays inside (Random Stuck)
    std::optional<GatePosition> position;  // nullopt for stateless gates
    bool operator==(const GateStep&) const = default;
};

/// One bird traversal of a single gate. Throws InvalidArgument on a bad entrance,
/// a missing/extra position, or a missing resolution for a Random gate.
GateStep step_gate(GateKind kind, std::optional<GatePosition> pos, PortName entrance,
                   std::optional<RandomResolution> res = std::nullopt);

using GateId = std::uint32_t;

struct Port {
    GateId gate = 0;
    PortName name = PortName::TI;
    auto operator<=>(const Port&) const = default;
};

enum class Sink : std::uint8_t { Pig, Consume };

/// A named exit leaves the circuit without being absorbed; used by standalone gadget circuits.
struct NamedExit {
    std::string name;
    auto operator<=>(const NamedExit&) const = default;
};

using Endpoint = std::variant<Port, Sink, NamedExit>;

struct GateInfo {
    GateKind kind;
    std::optional<GatePosition> initial;
    std::string label;
};

/// Packed positions of every stateful gate; bit set = open.
class GateState {
public:
    GateState() = default;
    explicit GateState(std::size_t gates) : words_((gates + 63) / 64, 0) {}

    bool open(GateId g) const { return (words_[g >> 6] >> (g & 63)) & 1u; }
    GatePosition position(GateId g) const { return open(g) ? kOpen : kClosed; }
    void set(GateId g, GatePosition p) {
        auto bit = std::uint64_t{1} << (g & 63);
        if (p == kOpen) words_[g >> 6] |= bit;
        else words_[g >> 6] &= ~bit;
    }
    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }
    std::size_t hash() const;
    /// Hex string, one character per four gates; length is linear in gate count.
    std::string serialize() const;
    static GateState deserialize(std::string_view hex, std::size_t gates);

    bool operator==(const GateState&) const = default;

private:
    std::vector<std::uint64_t> words_;
};

class Circuit {
public:
    static constexpr std::int32_t kTrapped = -1;
    static constexpr std::int32_t kPig = -2;
    static constexpr std::int32_t kConsume = -3;
    static constexpr std::int32_t kFirstNamedExit = -4;  // named exit k encoded as -4 - k

    GateId add_gate(GateKind kind, std::optional<GatePosition> initial, std::string label = {});
    /// Connects an exit to an endpoint. Each exit carries at most one tunnel.
    void add_tunnel(Port from, Endpoint to);
    void add_entrance(std::string name, Port to);
    void set_initial(GateId g, GatePosition p);

    std::size_t gate_count() const { return gates_.size(); }
    const GateInfo& gate(GateId g) const { return gates_.at(g); }
    const std::vector<GateInfo>& gates() const { return gates_; }
    const std::map<Port, Endpoint>& tunnels() const { return tunnels_; }
    const std::vector<std::pair<std::string, Port>>& entrances() const { return entrances_; }
    const std::vector<std::string>& exit_names() const { return exit_names_; }
    std::optional<Port> entrance(std::string_view name) const;
    std::optional<GateId> find_gate(std::string_view label) const;

    GateState initial_state() const;

    /// Encoded destination of a gate exit: >= 0 is gate * 16 + entrance port.
    std::int32_t route(GateId g, PortName p) const { return routes_[g * 16 + static_cast<int>(p)]; }

private:
    std::vector<GateInfo> gates_;
    std::map<Port, Endpoint> tunnels_;
    std::vector<std::pair<std::string, Port>> entrances_;
    std::map<std::string, Port, std::less<>> entrance_index_;
    std::map<std::string, GateId, std::less<>> label_index_;
    std::vector<std::string> exit_names_;
    std::vector<std::int32_t> routes_;
};

class Resolver {
public:
    virtual ~Resolver() = default;
    virtual RandomResolution resolve(GateId gate) = 0;
};

/// Uniform over {Left, Right, Stuck} with the given Stuck weight, reproducible from the seed.
class SeededResolver : public Resolver {
public:
    explicit SeededResolver(std::uint64_t seed, double stuck_probability = 1.0 / 3.0);
    RandomResolution resolve(GateId gate) override;

private:
    std::mt19937_64 rng_;
    double stuck_;
};

class ScriptedResolver : public Resolver {
public:
    explicit ScriptedResolver(std::vector<RandomResolution> script) : script_(std::move(script)) {}
    RandomResolution resolve(GateId gate) override;
    std::size_t consumed() const { return next_; }
    bool exhausted() const { return next_ >= script_.size(); }

private:
    std::vector<RandomResolution> script_;
    std::size_t next_ = 0;
};

/// For circuits that must not contain reachable Random gates.
class NoRandomResolver : public Resolver {
public:
    RandomResolution resolve(GateId gate) override;
};

enum class OutcomeKind : std::uint8_t { ExitedAt, Consumed, Trapped, PigKilled };
std::string_view to_string(OutcomeKind k);

struct BirdOutcome {
    OutcomeKind kind = OutcomeKind::Trapped;
    std::string exit_name;  // ExitedAt only
    bool operator==(const BirdOutcome&) const = default;
};

struct FlightStep {
    GateId gate;
    PortName entered;
    std::optional<PortName> exited;
    bool operator==(const FlightStep&) const = default;
};

struct Flight {
    BirdOutcome outcome;
    GateState state;
    std::vector<FlightStep> trace;
    std::vector<RandomResolution> resolutions;
};

Flight propagate_bird(const Circuit& c, GateState state, std::string_view entrance, Resolver& resolver);
Flight propagate_bird(const Circuit& c, GateState state, Port entrance, Resolver& resolver);
/// Fast path without trace bookkeeping; mutates `state`.
OutcomeKind propagate_in_place(const Circuit& c, GateState& state, Port entrance, Resolver& resolver,
                               std::int32_t* named_exit = nullptr);

/// Every flight over all Random resolution sequences (odometer order: Left, Right, Stuck).
std::vector<Flight> enumerate_flights(const Circuit& c, const GateState& state, Port entrance);

struct Finding {
    enum class Kind { DanglingTunnel, BadPort, UnreachableGate, EntranceCollision } kind;
    std::string message;
};

struct ValidationReport {
    std::vector<Finding> findings;
    bool ok() const { return findings.empty(); }
    std::size_t count(Finding::Kind k) const;
};

ValidationReport validate_circuit(const Circuit& c);

std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(std::string_view text);
std::string circuit_to_dot(const Circuit& c, std::string_view name = "circuit");

std::string to_string(const Port& p, const Circuit& c);

}  // namespace hardbirds
