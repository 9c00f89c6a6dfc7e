#include <algorithm>
#include <array>
#include <sstream>

#include "hardbirds/gadgets.hpp"

namespace hardbirds {

std::string_view to_string(OrderingPhase p) {
    switch (p) {
        case OrderingPhase::Ready: return "ready";
        case OrderingPhase::PlayerMoved: return "player-moved";
        case OrderingPhase::OpponentMoved: return "opponent-moved";
    }
    return "?";
}

std::string_view to_string(OrderingInput i) {
    switch (i) {
        case OrderingInput::SP: return "SP";
        case OrderingInput::CP: return "CP";
        case OrderingInput::SO: return "SO";
        case OrderingInput::CO: return "CO";
    }
    return "?";
}

std::optional<OrderingPhase> ordering_step(OrderingPhase phase, OrderingInput input) {
    using Ph = OrderingPhase;
    using In = OrderingInput;
    if (input == In::SO) return Ph::OpponentMoved;
    switch (phase) {
        case Ph::Ready:
            if (input == In::SP) return Ph::PlayerMoved;
            if (input == In::CO) return Ph::Ready;
            return std::nullopt;
        case Ph::PlayerMoved:
            if (input == In::CP) return Ph::PlayerMoved;
            return std::nullopt;
        case Ph::OpponentMoved:
            if (input == In::CO) return Ph::Ready;
            return std::nullopt;
    }
    return std::nullopt;
}

GadgetState gadget_state(const GadgetBlueprint& b, const std::vector<GatePosition>& positions) {
    if (positions.size() != b.gates.size()) throw InvalidArgument("position list does not match gadget gates");
    auto open = [&](std::string_view role) { return positions[b.role_index(role)] == kOpen; };
    switch (b.kind) {
        case GadgetKind::EQ: return EqState{open("A1") && open("A2") && open("S1") && open("S2")};
        case GadgetKind::UQT: return UqtState{open("A1")};
        case GadgetKind::UQF: return UqfState{open("A1") && open("S1") && open("S2"), open("A2")};
        case GadgetKind::ClauseAbed:
            return ClauseAbedState{open("S1") && open("S2") && open("S3"), open("S4") || open("S5") || open("S6")};
        case GadgetKind::Finish:
            if (!open("S1")) return FinishState{FinishStatus::Unsolvable};
            return FinishState{open("A1") ? FinishStatus::Enabled : FinishStatus::Disabled};
        case GadgetKind::UQR: return UqrState{open("A1")};
        case GadgetKind::Ordering:
            if (open("X1")) return OrderingState{OrderingPhase::PlayerMoved};
            if (open("Y1")) return OrderingState{OrderingPhase::OpponentMoved};
            return OrderingState{OrderingPhase::Ready};
        case GadgetKind::Choice: {
            std::size_t k = 0;
            while (k < b.gates.size() && positions[k] == kOpen) ++k;
            return ChoiceState{k};
        }
        case GadgetKind::RandomGadget: return RandomGadgetState{};
        case GadgetKind::ClauseAbes:
            return ClauseAbesState{std::all_of(positions.begin(), positions.end(), [](GatePosition p) { return p == kOpen; })};
        case GadgetKind::Result: return ResultState{open("S1")};
    }
    throw InvalidArgument("unknown gadget kind");
}

std::string describe(const GadgetState& s) {
    auto flag = [](bool b, const char* yes, const char* no) { return std::string(b ? yes : no); };
    return std::visit(
        [&](const auto& st) -> std::string {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, EqState> || std::is_same_v<T, UqtState> || std::is_same_v<T, UqrState>)
                return flag(st.enabled, "enabled", "disabled");
            else if constexpr (std::is_same_v<T, UqfState>)
                return flag(st.enabled, "enabled", "disabled") + flag(st.unlocked, ",unlocked", ",locked");
            else if constexpr (std::is_same_v<T, ClauseAbedState>)
                return flag(st.enabled, "enabled", "disabled") + flag(st.activated, ",activated", "");
            else if constexpr (std::is_same_v<T, FinishState>)
                return st.status == FinishStatus::Enabled ? "enabled" : st.status == FinishStatus::Disabled ? "disabled" : "unsolvable";
            else if constexpr (std::is_same_v<T, OrderingState>)
                return std::string(to_string(st.phase));
            else if constexpr (std::is_same_v<T, ChoiceState>)
                return "open-prefix=" + std::to_string(st.open_prefix);
            else if constexpr (std::is_same_v<T, RandomGadgetState>)
                return "-";
            else if constexpr (std::is_same_v<T, ClauseAbesState>)
                return flag(st.activated, "activated", "inactive");
            else
                return flag(st.open, "open", "closed");
        },
        s);
}

StandaloneGadget::StandaloneGadget(GadgetBlueprint b) : blueprint(std::move(b)) {
    for (const auto& g : blueprint.gates) gate_of_role.push_back(circuit.add_gate(g.kind, g.initial, g.role));
    auto port_of = [&](const RolePort& rp) { return Port{gate_of_role[blueprint.role_index(rp.role)], rp.port}; };
    for (const auto& t : blueprint.tunnels) {
        if (auto* rp = std::get_if<RolePort>(&t.to)) circuit.add_tunnel(port_of(t.from), port_of(*rp));
        else circuit.add_tunnel(port_of(t.from), std::get<Sink>(t.to));
    }
    for (const auto& p : blueprint.ports) {
        if (p.direction == PortDirection::Input) circuit.add_entrance(p.label, port_of(p.at));
        else circuit.add_tunnel(port_of(p.at), NamedExit{p.label});
    }
}

GateState StandaloneGadget::state_from(const std::vector<GatePosition>& positions) const {
    GateState s(circuit.gate_count());
    for (std::size_t i = 0; i < positions.size(); ++i)
        if (is_stateful(blueprint.gates[i].kind)) s.set(gate_of_role[i], positions[i]);
    return s;
}

std::vector<GatePosition> StandaloneGadget::positions_of(const GateState& s) const {
    std::vector<GatePosition> out;
    for (std::size_t i = 0; i < blueprint.gates.size(); ++i)
        out.push_back(is_stateful(blueprint.gates[i].kind) ? s.position(gate_of_role[i]) : kClosed);
    return out;
}

std::string StandaloneGadget::result_label(const Flight& f) const {
    switch (f.outcome.kind) {
        case OutcomeKind::ExitedAt: return f.outcome.exit_name;
        case OutcomeKind::Consumed: return "consume";
        case OutcomeKind::PigKilled: return "pig";
        case OutcomeKind::Trapped: return "trapped";
    }
    return "?";
}

BehaviorTable enumerate_gadget_behavior(const GadgetBlueprint& b) {
    StandaloneGadget sg(b);
    BehaviorTable t{b, {}, {}};
    std::vector<std::size_t> stateful;
    for (std::size_t i = 0; i < b.gates.size(); ++i)
        if (is_stateful(b.gates[i].kind)) stateful.push_back(i), t.stateful_roles.push_back(b.gates[i].role);
    const auto inputs = b.inputs();
    if (stateful.size() > 20 || (std::size_t{1} << stateful.size()) * inputs.size() > (std::size_t{1} << 20))
        throw InvalidArgument("behavior table would exceed 2^20 rows");

    const std::size_t combos = std::size_t{1} << stateful.size();
    for (std::size_t m = 0; m < combos; ++m) {
        std::vector<GatePosition> pos(b.gates.size(), kClosed);
        std::vector<GatePosition> cur;
        for (std::size_t k = 0; k < stateful.size(); ++k) {
            // bit set = closed so that row 0 is the all-open state
            pos[stateful[k]] = (m >> (stateful.size() - 1 - k)) & 1u ? kClosed : kOpen;
            cur.push_back(pos[stateful[k]]);
        }
        GateState s = sg.state_from(pos);
        for (const auto& in : inputs) {
            for (const auto& f : enumerate_flights(sg.circuit, s, *sg.circuit.entrance(in.label))) {
                BehaviorRow row{cur, in.label, f.resolutions, {}, sg.result_label(f)};
                auto after = sg.positions_of(f.state);
                for (auto k : stateful) row.next.push_back(after[k]);
                t.rows.push_back(std::move(row));
                if (t.rows.size() > (std::size_t{1} << 20)) throw InvalidArgument("behavior table would exceed 2^20 rows");
            }
        }
    }
    return t;
}

std::string format_behavior_table(const BehaviorTable& t) {
    auto positions = [&](const std::vector<GatePosition>& ps) {
        std::string s;
        for (auto p : ps) s.push_back(p == kOpen ? 'o' : 'c');
        return s;
    };
    std::string roles;
    for (const auto& r : t.stateful_roles) roles += (roles.empty() ? "" : " ") + r;
    std::vector<std::array<std::string, 6>> cells;
    cells.push_back({"current (" + roles + ")", "state", "input", "random", "next", "output"});
    StandaloneGadget sg(t.blueprint);
    std::vector<std::size_t> stateful;
    for (std::size_t i = 0; i < t.blueprint.gates.size(); ++i)
        if (is_stateful(t.blueprint.gates[i].kind)) stateful.push_back(i);
    for (const auto& r : t.rows) {
        std::vector<GatePosition> full(t.blueprint.gates.size(), kClosed);
        for (std::size_t k = 0; k < stateful.size(); ++k) full[stateful[k]] = r.current[k];
        std::string res;
        for (auto x : r.resolutions) res += to_string(x).substr(0, 1);
        cells.push_back({positions(r.current), describe(gadget_state(t.blueprint, full)), r.input, res.empty() ? "-" : res,
                         r.next == r.current ? "" : positions(r.next), r.output});
    }
    std::array<std::size_t, 6> width{};
    for (const auto& row : cells)
        for (std::size_t i = 0; i < 6; ++i) width[i] = std::max(width[i], row[i].size());
    std::ostringstream os;
    os << to_string(t.blueprint.kind) << " (" << t.rows.size() << " rows)\n";
    for (std::size_t r = 0; r < cells.size(); ++r) {
        for (std::size_t i = 0; i < 6; ++i) {
            os << (i ? " | " : "") << cells[r][i];
            if (i + 1 < 6) os << std::string(width[i] - cells[r][i].size(), ' ');
        }
        os << "\n";
        if (r == 0) {
            for (std::size_t i = 0; i < 6; ++i) os << (i ? "-+-" : "") << std::string(width[i], '-');
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace hardbirds
