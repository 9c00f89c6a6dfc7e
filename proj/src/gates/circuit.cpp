#include <algorithm>
#include <functional>

#include "hardbirds/gates.hpp"

namespace hardbirds {

GateId Circuit::add_gate(GateKind kind, std::optional<GatePosition> initial, std::string label) {
    if (is_stateful(kind) && !initial)
        throw InvalidArgument(std::string(to_string(kind)) + " gate '" + label + "' needs an initial position");
    if (!is_stateful(kind) && initial)
        throw InvalidArgument(std::string(to_string(kind)) + " gate '" + label + "' has no position");
    GateId id = static_cast<GateId>(gates_.size());
    if (label.empty()) label = "g" + std::to_string(id);
    if (!label_index_.emplace(label, id).second) throw InvalidArgument("duplicate gate label '" + label + "'");
    gates_.push_back({kind, initial, std::move(label)});
    routes_.resize(gates_.size() * 16, kTrapped);
    return id;
}

void Circuit::add_tunnel(Port from, Endpoint to) {
    if (from.gate >= gates_.size()) throw InvalidArgument("tunnel starts at unknown gate " + std::to_string(from.gate));
    const auto& g = gates_[from.gate];
    if (is_entrance(from.name) || !port_valid_for(g.kind, from.name))
        throw InvalidArgument(std::string(to_string(from.name)) + " is not an exit of " + g.label);
    if (tunnels_.count(from)) throw InvalidArgument("exit " + g.label + "." + std::string(to_string(from.name)) + " already tunneled");
    if (auto* p = std::get_if<Port>(&to); p && p->gate < gates_.size()) {
        if (!is_entrance(p->name) || !port_valid_for(gates_[p->gate].kind, p->name))
            throw InvalidArgument(std::string(to_string(p->name)) + " is not an entrance of " + gates_[p->gate].label);
    }
    std::int32_t code;
    if (auto* p = std::get_if<Port>(&to)) {
        code = static_cast<std::int32_t>(p->gate * 16 + static_cast<int>(p->name));
    } else if (auto* s = std::get_if<Sink>(&to)) {
        code = *s == Sink::Pig ? kPig : kConsume;
    } else {
        const auto& name = std::get<NamedExit>(to).name;
        auto it = std::find(exit_names_.begin(), exit_names_.end(), name);
        if (it == exit_names_.end()) {
            exit_names_.push_back(name);
            it = exit_names_.end() - 1;
        }
        code = kFirstNamedExit - static_cast<std::int32_t>(it - exit_names_.begin());
    }
    tunnels_.emplace(from, std::move(to));
    routes_[from.gate * 16 + static_cast<int>(from.name)] = code;
}

void Circuit::add_entrance(std::string name, Port to) {
    entrance_index_.emplace(name, to);  // first wins; duplicates surface in validate_circuit
    entrances_.emplace_back(std::move(name), to);
}

void Circuit::set_initial(GateId g, GatePosition p) {
    auto& info = gates_.at(g);
    if (!is_stateful(info.kind)) throw InvalidArgument(info.label + " has no position");
    info.initial = p;
}

std::optional<Port> Circuit::entrance(std::string_view name) const {
    auto it = entrance_index_.find(name);
    if (it == entrance_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<GateId> Circuit::find_gate(std::string_view label) const {
    auto it = label_index_.find(label);
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
}

GateState Circuit::initial_state() const {
    GateState s(gates_.size());
    for (GateId g = 0; g < gates_.size(); ++g)
        if (gates_[g].initial) s.set(g, *gates_[g].initial);
    return s;
}

std::size_t GateState::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto w : words_) {
        h ^= w;
        h *= 1099511628211ull;
        h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
}

std::string GateState::serialize() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (auto w : words_)
        for (int nib = 0; nib < 16; ++nib) out.push_back(digits[(w >> (4 * nib)) & 0xf]);
    return out;
}

GateState GateState::deserialize(std::string_view hex, std::size_t gates) {
    GateState s(gates);
    if (hex.size() != s.words_.size() * 16) throw InvalidArgument("state string has wrong length");
    for (std::size_t i = 0; i < hex.size(); ++i) {
        char ch = hex[i];
        std::uint64_t v;
        if (ch >= '0' && ch <= '9') v = ch - '0';
        else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
        else throw InvalidArgument("bad hex digit in state string");
        s.words_[i / 16] |= v << (4 * (i % 16));
    }
    return s;
}

SeededResolver::SeededResolver(std::uint64_t seed, double stuck_probability) : rng_(seed), stuck_(stuck_probability) {}

RandomResolution SeededResolver::resolve(GateId) {
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    if (u < stuck_) return RandomResolution::Stuck;
    return u < stuck_ + (1.0 - stuck_) / 2 ? RandomResolution::Left : RandomResolution::Right;
}

RandomResolution ScriptedResolver::resolve(GateId gate) {
    if (next_ >= script_.size()) throw CircuitError("scripted resolver exhausted at gate " + std::to_string(gate));
    return script_[next_++];
}

RandomResolution NoRandomResolver::resolve(GateId gate) {
    throw CircuitError("Random gate " + std::to_string(gate) + " reached with no resolver");
}

std::string_view to_string(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::ExitedAt: return "exited";
        case OutcomeKind::Consumed: return "consumed";
        case OutcomeKind::Trapped: return "trapped";
        case OutcomeKind::PigKilled: return "pig killed";
    }
    return "?";
}

namespace {

// Walks one bird. `on_step(gate, entered, exited)` and `on_res(r)` observe the flight.
template <class OnStep, class OnRes>
OutcomeKind walk(const Circuit& c, GateState& state, Port entrance, Resolver& resolver, std::int32_t* named_exit,
                 OnStep&& on_step, OnRes&& on_res) {
    const std::size_t n = c.gate_count();
    const std::size_t cap = std::max<std::size_t>(4 * n, 4);
    std::int32_t cur = static_cast<std::int32_t>(entrance.gate * 16 + static_cast<int>(entrance.name));
    for (std::size_t steps = 0;; ++steps) {
        if (steps >= cap) throw CircuitError("bird exceeded " + std::to_string(cap) + " gate visits; circuit has a loop");
        GateId g = static_cast<GateId>(cur >> 4);
        auto in = static_cast<PortName>(cur & 15);
        if (g >= n) throw CircuitError("tunnel leads to missing gate " + std::to_string(g));
        GateKind kind = c.gate(g).kind;
        PortName out;
        switch (kind) {
            case GateKind::Selector:
                if (in == PortName::TI) out = state.open(g) ? PortName::TL : PortName::TR;
                else if (in == PortName::LI) out = PortName::LO, state.set(g, kOpen);
                else if (in == PortName::RI) out = PortName::RO, state.set(g, kClosed);
                else throw CircuitError("bad Selector entrance on " + c.gate(g).label);
                break;
            case GateKind::AUT:
                if (in == PortName::TI) {
                    if (state.open(g)) out = PortName::TL, state.set(g, kClosed);
                    else out = PortName::TR;
                } else if (in == PortName::LI) {
                    out = PortName::LO, state.set(g, kOpen);
                } else {
                    throw CircuitError("bad AUT entrance on " + c.gate(g).label);
                }
                break;
            case GateKind::Random: {
                if (in != PortName::T) throw CircuitError("bad Random entrance on " + c.gate(g).label);
                auto r = resolver.resolve(g);
                on_res(r);
                if (r == RandomResolution::Stuck) {
                    on_step(g, in, std::optional<PortName>{});
                    return OutcomeKind::Trapped;
                }
                out = r == RandomResolution::Left ? PortName::L : PortName::R;
                break;
            }
            case GateKind::Crossover:
                if (in == PortName::DI) out = PortName::DO;
                else if (in == PortName::VI) out = PortName::VO;
                else throw CircuitError("bad Crossover entrance on " + c.gate(g).label);
                break;
            default: throw CircuitError("unknown gate kind");
        }
        on_step(g, in, std::optional<PortName>{out});
        std::int32_t r = c.route(g, out);
        if (r >= 0) {
            cur = r;
            continue;
        }
        switch (r) {
            case Circuit::kTrapped: return OutcomeKind::Trapped;
            case Circuit::kPig: return OutcomeKind::PigKilled;
            case Circuit::kConsume: return OutcomeKind::Consumed;
            default:
                if (named_exit) *named_exit = Circuit::kFirstNamedExit - r;
                return OutcomeKind::ExitedAt;
        }
    }
}

}  // namespace

OutcomeKind propagate_in_place(const Circuit& c, GateState& state, Port entrance, Resolver& resolver, std::int32_t* named_exit) {
    return walk(c, state, entrance, resolver, named_exit, [](GateId, PortName, std::optional<PortName>) {},
                [](RandomResolution) {});
}

Flight propagate_bird(const Circuit& c, GateState state, Port entrance, Resolver& resolver) {
    Flight f;
    std::int32_t exit_index = -1;
    auto kind = walk(
        c, state, entrance, resolver, &exit_index,
        [&](GateId g, PortName in, std::optional<PortName> out) { f.trace.push_back({g, in, out}); },
        [&](RandomResolution r) { f.resolutions.push_back(r); });
    f.outcome.kind = kind;
    if (kind == OutcomeKind::ExitedAt) f.outcome.exit_name = c.exit_names().at(static_cast<std::size_t>(exit_index));
    f.state = std::move(state);
    return f;
}

Flight propagate_bird(const Circuit& c, GateState state, std::string_view entrance, Resolver& resolver) {
    auto port = c.entrance(entrance);
    if (!port) throw InvalidArgument("no entrance named '" + std::string(entrance) + "'");
    return propagate_bird(c, std::move(state), *port, resolver);
}

namespace {

// Answers from a fixed prefix, then defaults to Left while recording how far it got.
class OdometerResolver : public Resolver {
public:
    explicit OdometerResolver(std::vector<RandomResolution>& seq) : seq_(seq) {}
    RandomResolution resolve(GateId) override {
        if (used_ == seq_.size()) seq_.push_back(RandomResolution::Left);
        return seq_[used_++];
    }
    std::size_t used() const { return used_; }

private:
    std::vector<RandomResolution>& seq_;
    std::size_t used_ = 0;
};

}  // namespace

std::vector<Flight> enumerate_flights(const Circuit& c, const GateState& state, Port entrance) {
    std::vector<Flight> out;
    std::vector<RandomResolution> seq;
    while (true) {
        OdometerResolver res(seq);
        out.push_back(propagate_bird(c, state, entrance, res));
        seq.resize(res.used());
        while (!seq.empty() && seq.back() == RandomResolution::Stuck) seq.pop_back();
        if (seq.empty()) break;
        seq.back() = static_cast<RandomResolution>(static_cast<int>(seq.back()) + 1);
    }
    return out;
}

std::size_t ValidationReport::count(Finding::Kind k) const {
    return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(), [&](const Finding& f) { return f.kind == k; }));
}

std::string to_string(const Port& p, const Circuit& c) {
    std::string gate = p.gate < c.gate_count() ? c.gate(p.gate).label : "#" + std::to_string(p.gate);
    return gate + "." + std::string(to_string(p.name));
}

ValidationReport validate_circuit(const Circuit& c) {
    ValidationReport rep;
    const std::size_t n = c.gate_count();
    for (const auto& [from, to] : c.tunnels()) {
        if (auto* p = std::get_if<Port>(&to)) {
            if (p->gate >= n) {
                rep.findings.push_back({Finding::Kind::DanglingTunnel, "tunnel " + to_string(from, c) + " -> missing gate " + std::to_string(p->gate)});
            } else if (!is_entrance(p->name) || !port_valid_for(c.gate(p->gate).kind, p->name)) {
                rep.findings.push_back({Finding::Kind::BadPort, "tunnel " + to_string(from, c) + " -> non-entrance " + to_string(*p, c)});
            }
        }
    }
    std::map<std::string, int> names;
    for (const auto& [name, port] : c.entrances()) {
        if (++names[name] == 2) rep.findings.push_back({Finding::Kind::EntranceCollision, "entrance name '" + name + "' used more than once"});
        if (port.gate >= n) {
            rep.findings.push_back({Finding::Kind::DanglingTunnel, "entrance '" + name + "' -> missing gate " + std::to_string(port.gate)});
        } else if (!is_entrance(port.name) || !port_valid_for(c.gate(port.gate).kind, port.name)) {
            rep.findings.push_back({Finding::Kind::BadPort, "entrance '" + name + "' -> non-entrance " + to_string(port, c)});
        }
    }

    // A gate is reachable if some (gate, entrance port) is reachable, following every exit
    // that the entrance can produce under some position or resolution.
    std::vector<char> seen(n * 16, 0), gate_seen(n, 0);
    std::vector<Port> stack;
    auto push = [&](Port p) {
        if (p.gate >= n || !is_entrance(p.name) || !port_valid_for(c.gate(p.gate).kind, p.name)) return;
        auto idx = p.gate * 16 + static_cast<int>(p.name);
        if (!seen[idx]) seen[idx] = 1, stack.push_back(p);
    };
    for (const auto& [name, port] : c.entrances()) push(port);
    while (!stack.empty()) {
        Port p = stack.back();
        stack.pop_back();
        gate_seen[p.gate] = 1;
        auto kind = c.gate(p.gate).kind;
        std::vector<PortName> outs;
        if (kind == GateKind::Random) {
            outs = {PortName::L, PortName::R};
        } else if (is_stateful(kind)) {
            for (auto pos : {kOpen, kClosed}) outs.push_back(*step_gate(kind, pos, p.name).exit);
        } else {
            outs.push_back(*step_gate(kind, std::nullopt, p.name).exit);
        }
        for (auto out : outs) {
            auto it = c.tunnels().find(Port{p.gate, out});
            if (it == c.tunnels().end()) continue;
            if (auto* q = std::get_if<Port>(&it->second)) push(*q);
        }
    }
    for (GateId g = 0; g < n; ++g)
        if (!gate_seen[g]) rep.findings.push_back({Finding::Kind::UnreachableGate, "gate " + c.gate(g).label + " is unreachable from every entrance"});
    return rep;
}

}  // namespace hardbirds
