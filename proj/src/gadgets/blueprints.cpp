#include <algorithm>
#include <set>

#include "hardbirds/gadgets.hpp"

namespace hardbirds {

namespace {

using P = PortName;

class Builder {
public:
    explicit Builder(GadgetKind kind, GadgetParams params) { b_.kind = kind, b_.params = std::move(params); }

    Builder& gate(std::string role, GateKind kind, std::optional<GatePosition> initial = std::nullopt) {
        if (is_stateful(kind) && !initial) initial = kClosed;
        b_.gates.push_back({std::move(role), kind, initial});
        return *this;
    }
    Builder& wire(std::string from, P fp, std::string to, P tp) {
        b_.tunnels.push_back({{std::move(from), fp}, RolePort{std::move(to), tp}});
        return *this;
    }
    Builder& sink(std::string from, P fp, Sink s) {
        b_.tunnels.push_back({{std::move(from), fp}, s});
        return *this;
    }
    Builder& in(std::string label, std::string role, P p, bool player = false) {
        b_.ports.push_back({std::move(label), {std::move(role), p}, PortDirection::Input, player});
        return *this;
    }
    Builder& out(std::string label, std::string role, P p) {
        b_.ports.push_back({std::move(label), {std::move(role), p}, PortDirection::Output, false});
        return *this;
    }
    GadgetBlueprint done() { return std::move(b_); }

private:
    GadgetBlueprint b_;
};

std::string idx(const char* prefix, std::size_t i) { return prefix + std::to_string(i); }

void need_var(const GadgetParams& p, GadgetKind k) {
    if (!p.var) throw InvalidArgument(std::string(to_string(k)) + " gadget needs a variable");
}

GadgetBlueprint eq(const GadgetParams& p) {
    need_var(p, GadgetKind::EQ);
    Builder b(GadgetKind::EQ, p);
    b.gate("S1", GateKind::Selector).gate("S2", GateKind::Selector);
    for (auto r : {"A1", "A2", "A3", "A4"}) b.gate(r, GateKind::AUT);
    b.wire("A1", P::TL, "S1", P::TI).wire("S1", P::TL, "S2", P::RI).wire("S2", P::RO, "A3", P::LI);
    b.wire("A2", P::TL, "S1", P::RI).wire("S1", P::RO, "S2", P::TI).wire("S2", P::TL, "A4", P::LI);
    b.wire("A1", P::LO, "A2", P::LI).wire("A2", P::LO, "S1", P::LI).wire("S1", P::LO, "S2", P::LI);
    b.in("enable_in", "A1", P::LI);
    b.in("set_pos_in", "A1", P::TI, true).in("set_neg_in", "A2", P::TI, true);
    b.in("check_pos_in", "A3", P::TI, true).in("check_neg_in", "A4", P::TI, true);
    b.out("modify_pos_out", "A3", P::LO).out("modify_neg_out", "A4", P::LO);
    b.out("enable_next_out", "A3", P::TL).out("enable_next_out", "A4", P::TL);
    b.out("enable_chain_out", "S2", P::LO);
    return b.done();
}

GadgetBlueprint uqt(const GadgetParams& p) {
    need_var(p, GadgetKind::UQT);
    Builder b(GadgetKind::UQT, p);
    b.gate("A1", GateKind::AUT);
    b.in("enable_in", "A1", P::LI).in("advance_in", "A1", P::TI, true);
    b.out("modify_pos_out", "A1", P::LO).out("enable_next_out", "A1", P::TL);
    return b.done();
}

GadgetBlueprint uqf(const GadgetParams& p) {
    need_var(p, GadgetKind::UQF);
    Builder b(GadgetKind::UQF, p);
    b.gate("S1", GateKind::Selector).gate("S2", GateKind::Selector);
    for (auto r : {"A1", "A2", "A3"}) b.gate(r, GateKind::AUT);
    b.wire("A1", P::TL, "S1", P::RI).wire("S1", P::RO, "S2", P::TI).wire("S2", P::TL, "A2", P::LI).wire("A2", P::LO, "A3", P::LI);
    b.wire("S1", P::TL, "S2", P::RI).wire("S2", P::RO, "A2", P::TI);
    b.wire("A1", P::LO, "S1", P::LI).wire("S1", P::LO, "S2", P::LI);
    b.in("enable_in", "A1", P::LI);
    b.in("set_neg_in", "A1", P::TI, true).in("next_in", "S1", P::TI, true).in("adjacent_in", "A3", P::TI, true);
    b.out("modify_neg_out", "A3", P::LO).out("next_uqf_out", "A2", P::TL).out("enable_adjacent_out", "A3", P::TL);
    b.out("enable_chain_out", "S2", P::LO);
    return b.done();
}

GadgetBlueprint clause_abed(const GadgetParams& p) {
    if (p.literals.size() != 3) throw InvalidArgument("a 3-CNF clause gadget needs exactly 3 literals");
    Builder b(GadgetKind::ClauseAbed, p);
    for (std::size_t i = 1; i <= 6; ++i) b.gate(idx("S", i), GateKind::Selector);
    for (std::size_t k = 1; k <= 3; ++k) b.wire(idx("S", k), P::TL, idx("S", k + 3), P::TI);
    b.wire("S1", P::LO, "S2", P::LI).wire("S2", P::LO, "S3", P::LI);
    b.wire("S1", P::RO, "S2", P::RI).wire("S2", P::RO, "S3", P::RI);
    b.in("enable_in", "S1", P::LI).in("disable_in", "S1", P::RI);
    for (std::size_t k = 1; k <= 3; ++k) b.in(idx("check", k) + "_in", idx("S", k), P::TI, true);
    for (std::size_t k = 1; k <= 3; ++k) {
        auto slot = idx("S", k + 3);
        b.in(idx("lit", k) + "_true_in", slot, P::LI).in(idx("lit", k) + "_false_in", slot, P::RI);
        b.out(idx("lit", k) + "_true_out", slot, P::LO).out(idx("lit", k) + "_false_out", slot, P::RO);
        b.out("enable_next_out", slot, P::TL);
    }
    b.out("enable_chain_out", "S3", P::LO).out("disable_chain_out", "S3", P::RO);
    return b.done();
}

GadgetBlueprint finish(const GadgetParams& p) {
    Builder b(GadgetKind::Finish, p);
    b.gate("A1", GateKind::AUT, kClosed).gate("S1", GateKind::Selector, kOpen);
    b.sink("A1", P::TL, Sink::Consume).wire("A1", P::TR, "S1", P::RI).sink("S1", P::RO, Sink::Consume);
    b.sink("S1", P::TL, Sink::Pig);
    b.in("enable_in", "A1", P::LI).in("trigger_in", "A1", P::TI).in("pass_in", "S1", P::TI);
    b.out("enabled_out", "A1", P::LO);
    return b.done();
}

GadgetBlueprint uqr(const GadgetParams& p) {
    need_var(p, GadgetKind::UQR);
    Builder b(GadgetKind::UQR, p);
    b.gate("A1", GateKind::AUT).gate("R1", GateKind::Random);
    b.wire("A1", P::LO, "R1", P::T).sink("R1", P::R, Sink::Consume);
    b.in("enable_in", "A1", P::LI).in("advance_in", "A1", P::TI, true);
    b.out("modify_pos_out", "R1", P::L).out("enable_next_out", "A1", P::TL);
    return b.done();
}

// Four Selectors: X1..X3 record "player has moved", Y1 records "opponent has moved".
GadgetBlueprint ordering(const GadgetParams& p) {
    Builder b(GadgetKind::Ordering, p);
    for (auto r : {"X1", "X2", "X3", "Y1"}) b.gate(r, GateKind::Selector, kClosed);
    b.wire("X1", P::TR, "Y1", P::TI).wire("Y1", P::TR, "X1", P::LI);
    b.wire("X1", P::LO, "X2", P::LI).wire("X2", P::LO, "X3", P::LI);
    b.wire("X3", P::TR, "Y1", P::RI);
    b.wire("X1", P::RO, "X2", P::RI).wire("X2", P::RO, "X3", P::RI).wire("X3", P::RO, "Y1", P::LI);
    b.in("SP_I", "X1", P::TI, true).in("CP_I", "X2", P::TI, true).in("SO_I", "X1", P::RI, true).in("CO_I", "X3", P::TI, true);
    b.out("SP_O", "X3", P::LO).out("CP_O", "X2", P::TL).out("SO_O", "Y1", P::LO).out("CO_O", "Y1", P::RO);
    return b.done();
}

GadgetBlueprint choice(const GadgetParams& p) {
    if (p.literals.empty()) throw InvalidArgument("Choice gadget needs at least one literal");
    std::set<Literal> seen;
    for (const auto& l : p.literals)
        if (!seen.insert(l).second) throw InvalidArgument("duplicate literal " + to_string(l) + " in Choice gadget");
    Builder b(GadgetKind::Choice, p);
    const std::size_t n = p.literals.size();
    for (std::size_t i = 1; i <= n; ++i) b.gate(idx("A", i), GateKind::AUT);
    for (std::size_t i = 1; i < n; ++i) b.wire(idx("A", i), P::TL, idx("A", i + 1), P::TI);
    b.sink(idx("A", n), P::TL, Sink::Consume);
    for (std::size_t i = 1; i <= n; ++i) b.sink(idx("A", i), P::LO, Sink::Consume);
    b.in("choice_in", "A1", P::TI);
    for (std::size_t i = 1; i <= n; ++i) b.in(idx("open", i) + "_in", idx("A", i), P::LI, true);
    for (std::size_t i = 1; i <= n; ++i) b.out(idx("modify_literal", i) + "_out", idx("A", i), P::TR);
    return b.done();
}

// Heap layout: gate i has children 2i (left) and 2i+1 (right); children past the last
// gate are leaves.
GadgetBlueprint random_gadget(const GadgetParams& p) {
    if (p.literals.size() < 2) throw InvalidArgument("Random gadget needs at least two outcomes");
    Builder b(GadgetKind::RandomGadget, p);
    const std::size_t leaves = p.literals.size(), n = leaves - 1;
    for (std::size_t i = 1; i <= n; ++i) b.gate(idx("R", i), GateKind::Random);
    for (std::size_t i = 1; i <= n; ++i) {
        for (auto [child, port] : {std::pair{2 * i, P::L}, std::pair{2 * i + 1, P::R}}) {
            if (child <= n) b.wire(idx("R", i), port, idx("R", child), P::T);
            else b.out(idx("modify_literal", child - n) + "_out", idx("R", i), port);
        }
    }
    b.in("random_in", "R1", P::T);
    return b.done();
}

GadgetBlueprint clause_abes(const GadgetParams& p) {
    if (p.literals.empty() || p.literals.size() > DnfFormula::kMaxTermLength)
        throw InvalidArgument("a term gadget needs 1 to 12 literals");
    Builder b(GadgetKind::ClauseAbes, p);
    const std::size_t n = p.literals.size();
    for (std::size_t i = 1; i <= n; ++i) b.gate(idx("S", i), GateKind::Selector);
    for (std::size_t i = 1; i < n; ++i) b.wire(idx("S", i), P::TL, idx("S", i + 1), P::TI);
    b.in("check_in", "S1", P::TI);
    b.out("satisfied_out", idx("S", n), P::TL);
    for (std::size_t i = 1; i <= n; ++i) {
        auto slot = idx("S", i);
        b.out("next_clause_out", slot, P::TR);
        b.in(idx("lit", i) + "_true_in", slot, P::LI).in(idx("lit", i) + "_false_in", slot, P::RI);
        b.out(idx("lit", i) + "_true_out", slot, P::LO).out(idx("lit", i) + "_false_out", slot, P::RO);
    }
    return b.done();
}

GadgetBlueprint result(const GadgetParams& p) {
    Builder b(GadgetKind::Result, p);
    b.gate("S1", GateKind::Selector, kOpen);
    b.sink("S1", P::TL, Sink::Pig).sink("S1", P::RO, Sink::Consume);
    b.in("win_in", "S1", P::TI).in("lose_in", "S1", P::RI);
    return b.done();
}

}  // namespace

std::string_view to_string(GadgetKind k) {
    switch (k) {
        case GadgetKind::EQ: return "EQ";
        case GadgetKind::UQT: return "UQT";
        case GadgetKind::UQF: return "UQF";
        case GadgetKind::ClauseAbed: return "ClauseAbed";
        case GadgetKind::Finish: return "Finish";
        case GadgetKind::UQR: return "UQR";
        case GadgetKind::Ordering: return "Ordering";
        case GadgetKind::Choice: return "Choice";
        case GadgetKind::RandomGadget: return "RandomGadget";
        case GadgetKind::ClauseAbes: return "ClauseAbes";
        case GadgetKind::Result: return "Result";
    }
    return "?";
}

GadgetBlueprint build_gadget(GadgetKind kind, const GadgetParams& params) {
    switch (kind) {
        case GadgetKind::EQ: return eq(params);
        case GadgetKind::UQT: return uqt(params);
        case GadgetKind::UQF: return uqf(params);
        case GadgetKind::ClauseAbed: return clause_abed(params);
        case GadgetKind::Finish: return finish(params);
        case GadgetKind::UQR: return uqr(params);
        case GadgetKind::Ordering: return ordering(params);
        case GadgetKind::Choice: return choice(params);
        case GadgetKind::RandomGadget: return random_gadget(params);
        case GadgetKind::ClauseAbes: return clause_abes(params);
        case GadgetKind::Result: return result(params);
    }
    throw InvalidArgument("unknown gadget kind");
}

std::size_t GadgetBlueprint::role_index(std::string_view role) const {
    for (std::size_t i = 0; i < gates.size(); ++i)
        if (gates[i].role == role) return i;
    throw InvalidArgument("no gate with role '" + std::string(role) + "' in " + std::string(to_string(kind)));
}

std::vector<LabeledPort> GadgetBlueprint::ports_named(std::string_view label) const {
    std::vector<LabeledPort> out;
    for (const auto& p : ports)
        if (p.label == label) out.push_back(p);
    return out;
}

const LabeledPort& GadgetBlueprint::port(std::string_view label) const {
    const LabeledPort* found = nullptr;
    for (const auto& p : ports) {
        if (p.label != label) continue;
        if (found) throw InvalidArgument("port label '" + std::string(label) + "' is not unique");
        found = &p;
    }
    if (!found) throw InvalidArgument("no port labeled '" + std::string(label) + "' in " + std::string(to_string(kind)));
    return *found;
}

bool GadgetBlueprint::has_port(std::string_view label) const {
    return std::any_of(ports.begin(), ports.end(), [&](const LabeledPort& p) { return p.label == label; });
}

std::vector<LabeledPort> GadgetBlueprint::inputs() const {
    std::vector<LabeledPort> out;
    for (const auto& p : ports)
        if (p.direction == PortDirection::Input) out.push_back(p);
    return out;
}

std::vector<LabeledPort> GadgetBlueprint::outputs() const {
    std::vector<LabeledPort> out;
    for (const auto& p : ports)
        if (p.direction == PortDirection::Output) out.push_back(p);
    return out;
}

std::vector<LabeledPort> GadgetBlueprint::player_facing() const {
    std::vector<LabeledPort> out;
    for (const auto& p : ports)
        if (p.player_facing) out.push_back(p);
    return out;
}

std::size_t GadgetBlueprint::stateful_count() const {
    return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [](const GateSpec& g) { return is_stateful(g.kind); }));
}

}  // namespace hardbirds
