#include <algorithm>
#include <functional>
#include <set>

#include "hardbirds/reducer.hpp"

namespace hardbirds {

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::ABPD: return "ABPD";
        case Variant::ABED: return "ABED";
        case Variant::ABPS: return "ABPS";
        case Variant::ABES: return "ABES";
    }
    return "?";
}

std::optional<Variant> variant_from(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "abpd") return Variant::ABPD;
    if (lower == "abed") return Variant::ABED;
    if (lower == "abps") return Variant::ABPS;
    if (lower == "abes") return Variant::ABES;
    return std::nullopt;
}

bool is_stochastic(Variant v) { return v == Variant::ABPS || v == Variant::ABES; }

Port GadgetInstance::port(std::string_view label) const {
    const auto& p = blueprint.port(label);
    return {gate(p.at.role), p.at.port};
}

std::vector<Port> GadgetInstance::ports(std::string_view label) const {
    std::vector<Port> out;
    for (const auto& p : blueprint.ports_named(label)) out.push_back({gate(p.at.role), p.at.port});
    return out;
}

const GadgetInstance* ReductionOutput::find_gadget(std::string_view name) const {
    for (const auto& g : gadgets)
        if (g.name == name) return &g;
    return nullptr;
}

const GadgetInstance& ReductionOutput::gadget(std::string_view name) const {
    if (auto* g = find_gadget(name)) return *g;
    throw InvalidArgument("no gadget named '" + std::string(name) + "'");
}

std::vector<std::string> ReductionOutput::manifest() const {
    std::vector<std::string> out;
    for (const auto& [name, port] : circuit.entrances()) out.push_back(name);
    return out;
}

std::map<GadgetKind, int> ReductionOutput::inventory() const {
    std::map<GadgetKind, int> out;
    for (const auto& g : gadgets) ++out[g.blueprint.kind];
    return out;
}

ValidationReport validate_reduction(const ReductionOutput& r) {
    if (r.prelude.empty()) return validate_circuit(r.circuit);
    Circuit c = r.circuit;
    for (std::size_t i = 0; i < r.prelude.size(); ++i) c.add_entrance("prelude " + std::to_string(i), r.prelude[i]);
    return validate_circuit(c);
}

BigInt abpd_budget(int vars, int clauses) { return BigInt(2) * vars + clauses; }

BigInt abed_budget(int clauses, int existentials, int universals) {
    return (BigInt(clauses) + 2 * existentials + 3 * universals) << universals;
}

BigInt abps_budget(int existentials, int universals, int clauses) { return BigInt(2) * existentials + universals + clauses; }

BigInt abes_budget(int player_vars, int all_vars) { return (BigInt(2) * player_vars + 4) << all_vars; }

namespace {

using P = PortName;

struct Slot {
    Literal lit;
    Port true_in, false_in, true_out, false_out;
};

class LevelBuilder {
public:
    explicit LevelBuilder(ReductionOutput& r) : r_(r) {}

    GadgetInstance& add(std::string name, GadgetBlueprint b, int column = 0) {
        GadgetInstance g{std::move(name), std::move(b), column, next_row_++, {}};
        for (const auto& spec : g.blueprint.gates)
            g.gates.push_back(r_.circuit.add_gate(spec.kind, spec.initial, g.name + "." + spec.role));
        for (const auto& t : g.blueprint.tunnels) {
            Port from{g.gate(t.from.role), t.from.port};
            if (auto* rp = std::get_if<RolePort>(&t.to)) r_.circuit.add_tunnel(from, Port{g.gate(rp->role), rp->port});
            else r_.circuit.add_tunnel(from, std::get<Sink>(t.to));
        }
        for (const auto& p : g.blueprint.player_facing()) entrance(g, p.label);
        r_.gadgets.push_back(std::move(g));
        return r_.gadgets.back();
    }

    void entrance(const GadgetInstance& g, std::string_view label) {
        const auto& p = g.blueprint.port(label);
        Port at{g.gate(p.at.role), p.at.port};
        r_.circuit.add_entrance(r_.circuit.gate(at.gate).label + "." + std::string(to_string(at.name)), at);
    }

    void connect(Port from, Endpoint to) { r_.circuit.add_tunnel(from, std::move(to)); }
    void connect(const std::vector<Port>& from, const Endpoint& to) {
        for (const auto& f : from) connect(f, to);
    }

    void add_slots(const GadgetInstance& g, const std::vector<Literal>& lits) {
        for (std::size_t k = 1; k <= lits.size(); ++k) {
            auto l = "lit" + std::to_string(k);
            slots_.push_back({lits[k - 1], g.port(l + "_true_in"), g.port(l + "_false_in"), g.port(l + "_true_out"),
                              g.port(l + "_false_out")});
        }
    }

    /// Threads a bird leaving `from` through every slot mentioning `v`, in framework order,
    /// entering each slot on the side matching the literal's new truth value.
    void modify_chain(Port from, Var v, bool value) {
        if (!chains_.insert({v, value}).second) throw InvalidArgument("duplicate modify chain");
        r_.setters[from] = {v, value};
        Port at = from;
        for (const auto& s : slots_) {
            if (s.lit.var != v) continue;
            bool truth = s.lit.holds(value);
            connect(at, truth ? s.true_in : s.false_in);
            at = truth ? s.true_out : s.false_out;
        }
        connect(at, Sink::Consume);
    }

    /// Slots whose variable never gets a chain still need their outputs sunk.
    void sink_unused_slots() {
        for (const auto& s : slots_) {
            for (auto out : {s.true_out, s.false_out})
                if (!r_.circuit.tunnels().count(out)) connect(out, Sink::Consume);
        }
    }

    void set_slot_initials(const std::function<std::optional<bool>(Var)>& value_of) {
        for (const auto& s : slots_)
            if (auto v = value_of(s.lit.var)) r_.circuit.set_initial(s.true_in.gate, s.lit.holds(*v) ? kOpen : kClosed);
    }

    void pre_enable(const GadgetInstance& g, std::initializer_list<const char*> roles) {
        for (auto role : roles) r_.circuit.set_initial(g.gate(role), kOpen);
    }

private:
    ReductionOutput& r_;
    int next_row_ = 0;
    std::vector<Slot> slots_;
    std::set<std::pair<Var, bool>> chains_;
};

std::vector<Literal> clause_literals(const Clause3& c) { return {c[0], c[1], c[2]}; }

std::string numbered(const char* prefix, std::size_t i) { return std::string(prefix) + "_" + std::to_string(i); }

// Enables the first quantifier gadget of an ABPD/ABED/ABPS framework.
void start_gadget(LevelBuilder& b, ReductionOutput& r, const GadgetInstance& g) {
    if (g.blueprint.kind == GadgetKind::EQ) b.pre_enable(g, {"A1", "A2", "S1", "S2"});
    else r.prelude.push_back(g.port("enable_in"));
}

}  // namespace

ReductionOutput reduce_abpd(const CnfFormula& f) {
    f.validate();
    if (f.num_vars < 1) throw InvalidArgument("ABPD needs at least one variable");
    ReductionOutput r;
    r.variant = Variant::ABPD;
    r.source = f;
    LevelBuilder b(r);

    std::vector<std::size_t> eqs;
    for (Var v = 1; v <= f.num_vars; ++v) {
        b.add(numbered("EQ", v), build_gadget(GadgetKind::EQ, {v, {}}));
        eqs.push_back(r.gadgets.size() - 1);
    }
    std::vector<std::size_t> cls;
    for (std::size_t j = 0; j < f.clauses.size(); ++j) {
        auto& g = b.add(numbered("CL", j + 1), build_gadget(GadgetKind::ClauseAbed, {std::nullopt, clause_literals(f.clauses[j])}));
        b.add_slots(g, clause_literals(f.clauses[j]));
        cls.push_back(r.gadgets.size() - 1);
    }

    auto enable_target = [&](std::size_t i) -> Endpoint {
        return i + 1 < r.gadgets.size() ? Endpoint{r.gadgets[i + 1].port("enable_in")} : Endpoint{Sink::Pig};
    };
    for (std::size_t i = 0; i < r.gadgets.size(); ++i) {
        const auto& g = r.gadgets[i];
        b.connect(g.ports("enable_next_out"), enable_target(i));
        b.connect(g.port("enable_chain_out"), Sink::Consume);
        if (g.blueprint.kind == GadgetKind::ClauseAbed) b.connect(g.port("disable_chain_out"), Sink::Consume);
    }
    for (auto i : eqs) {
        const auto& g = r.gadgets[i];
        b.modify_chain(g.port("modify_pos_out"), *g.blueprint.params.var, true);
        b.modify_chain(g.port("modify_neg_out"), *g.blueprint.params.var, false);
    }
    b.sink_unused_slots();
    start_gadget(b, r, r.gadgets.front());
    r.bird_budget = abpd_budget(f.num_vars, static_cast<int>(f.clauses.size()));
    return r;
}

ReductionOutput reduce_abed(const QbfFormula& q) {
    q.validate();
    if (q.prefix.empty()) throw InvalidArgument("ABED needs at least one quantified variable");
    ReductionOutput r;
    r.variant = Variant::ABED;
    r.source = q;
    LevelBuilder b(r);

    // UQF column first (innermost universal on top) so every tunnel out of it runs downward.
    std::vector<Var> universals;
    for (auto it = q.prefix.rbegin(); it != q.prefix.rend(); ++it)
        if (it->quantifier == Quantifier::ForAll) universals.push_back(it->var);
    std::map<Var, std::size_t> uqf_of;
    for (auto v : universals) {
        auto& g = b.add(numbered("UQF", v), build_gadget(GadgetKind::UQF, {v, {}}), 1);
        uqf_of[v] = r.gadgets.size() - 1;
        if (uqf_of.size() == 1) b.entrance(g, "enable_in");
    }

    std::vector<std::size_t> main;
    for (const auto& qv : q.prefix) {
        bool ex = qv.quantifier == Quantifier::Exists;
        b.add(numbered(ex ? "EQ" : "UQT", qv.var), build_gadget(ex ? GadgetKind::EQ : GadgetKind::UQT, {qv.var, {}}));
        main.push_back(r.gadgets.size() - 1);
    }
    std::vector<std::size_t> cls;
    for (std::size_t j = 0; j < q.matrix.clauses.size(); ++j) {
        auto lits = clause_literals(q.matrix.clauses[j]);
        auto& g = b.add(numbered("CL", j + 1), build_gadget(GadgetKind::ClauseAbed, {std::nullopt, lits}));
        b.add_slots(g, lits);
        main.push_back(r.gadgets.size() - 1);
        cls.push_back(main.back());
    }
    b.add("FINISH", build_gadget(GadgetKind::Finish));
    main.push_back(r.gadgets.size() - 1);
    const auto& fin = r.gadgets.back();

    for (std::size_t k = 0; k + 1 < main.size(); ++k) {
        const auto& g = r.gadgets[main[k]];
        b.connect(g.ports("enable_next_out"), r.gadgets[main[k + 1]].port("enable_in"));
        if (g.blueprint.kind == GadgetKind::EQ || g.blueprint.kind == GadgetKind::ClauseAbed)
            b.connect(g.port("enable_chain_out"), Sink::Consume);
        if (g.blueprint.kind == GadgetKind::UQT) {
            auto& uqf = r.gadgets[uqf_of.at(*g.blueprint.params.var)];
            b.connect(uqf.port("enable_adjacent_out"), r.gadgets[main[k + 1]].port("enable_in"));
        }
    }

    // Disable chain: first UQF -> every clause -> Finish trigger.
    Endpoint trigger = fin.port("trigger_in");
    for (std::size_t j = 0; j < cls.size(); ++j) {
        const auto& g = r.gadgets[cls[j]];
        b.connect(g.port("disable_chain_out"), j + 1 < cls.size() ? Endpoint{r.gadgets[cls[j + 1]].port("disable_in")} : trigger);
    }
    Endpoint disable_head = cls.empty() ? trigger : Endpoint{r.gadgets[cls.front()].port("disable_in")};
    for (std::size_t k = 0; k < universals.size(); ++k) {
        const auto& g = r.gadgets[uqf_of.at(universals[k])];
        b.connect(g.port("enable_chain_out"), k == 0 ? disable_head : Endpoint{Sink::Consume});
        b.connect(g.port("next_uqf_out"),
                  k + 1 < universals.size() ? r.gadgets[uqf_of.at(universals[k + 1])].port("enable_in") : fin.port("pass_in"));
    }
    // With no universal there is nothing left to try once the clauses hold: pass straight to the pig.
    b.connect(fin.port("enabled_out"), universals.empty() ? Endpoint{fin.port("pass_in")} : Endpoint{Sink::Consume});

    for (auto i : main) {
        const auto& g = r.gadgets[i];
        if (g.blueprint.kind == GadgetKind::EQ) {
            b.modify_chain(g.port("modify_pos_out"), *g.blueprint.params.var, true);
            b.modify_chain(g.port("modify_neg_out"), *g.blueprint.params.var, false);
        } else if (g.blueprint.kind == GadgetKind::UQT) {
            b.modify_chain(g.port("modify_pos_out"), *g.blueprint.params.var, true);
            const auto& uqf = r.gadgets[uqf_of.at(*g.blueprint.params.var)];
            b.modify_chain(uqf.port("modify_neg_out"), *g.blueprint.params.var, false);
        }
    }
    b.sink_unused_slots();
    start_gadget(b, r, r.gadgets[main.front()]);
    r.pig_guard = fin.gate("S1");
    r.bird_budget = abed_budget(static_cast<int>(q.matrix.clauses.size()), q.existential_count(), q.universal_count());
    return r;
}

ReductionOutput reduce_abps(const QbfFormula& q) {
    q.validate();
    if (q.prefix.empty()) throw InvalidArgument("ABPS needs at least one quantified variable");
    ReductionOutput r;
    r.variant = Variant::ABPS;
    r.source = q;
    LevelBuilder b(r);

    std::set<Var> universal;
    for (const auto& qv : q.prefix) {
        bool ex = qv.quantifier == Quantifier::Exists;
        if (!ex) universal.insert(qv.var);
        b.add(numbered(ex ? "EQ" : "UQR", qv.var), build_gadget(ex ? GadgetKind::EQ : GadgetKind::UQR, {qv.var, {}}));
    }
    const std::size_t quantifiers = r.gadgets.size();
    for (std::size_t j = 0; j < q.matrix.clauses.size(); ++j) {
        auto lits = clause_literals(q.matrix.clauses[j]);
        auto& g = b.add(numbered("CL", j + 1), build_gadget(GadgetKind::ClauseAbed, {std::nullopt, lits}));
        b.add_slots(g, lits);
    }
    for (std::size_t i = 0; i < r.gadgets.size(); ++i) {
        const auto& g = r.gadgets[i];
        b.connect(g.ports("enable_next_out"), i + 1 < r.gadgets.size() ? Endpoint{r.gadgets[i + 1].port("enable_in")} : Endpoint{Sink::Pig});
        if (g.blueprint.kind != GadgetKind::UQR) b.connect(g.port("enable_chain_out"), Sink::Consume);
        if (g.blueprint.kind == GadgetKind::ClauseAbed) b.connect(g.port("disable_chain_out"), Sink::Consume);
    }
    for (std::size_t i = 0; i < quantifiers; ++i) {
        const auto& g = r.gadgets[i];
        Var v = *g.blueprint.params.var;
        b.modify_chain(g.port("modify_pos_out"), v, true);
        if (g.blueprint.kind == GadgetKind::EQ) b.modify_chain(g.port("modify_neg_out"), v, false);
    }
    b.sink_unused_slots();
    b.set_slot_initials([&](Var v) -> std::optional<bool> {
        if (universal.count(v)) return false;
        return std::nullopt;
    });
    start_gadget(b, r, r.gadgets.front());
    r.bird_budget = abps_budget(q.existential_count(), q.universal_count(), static_cast<int>(q.matrix.clauses.size()));
    return r;
}

ReductionOutput reduce_abes(const G2Setup& s) {
    s.validate();
    ReductionOutput r;
    r.variant = Variant::ABES;
    r.source = s;
    LevelBuilder b(r);

    auto literals_of = [](const std::vector<Var>& vars) {
        std::vector<Literal> out;
        for (auto v : vars) out.push_back(Literal::neg(v)), out.push_back(Literal::pos(v));
        return out;
    };
    const auto player_lits = literals_of(s.owned_by(Side::Player));
    const auto opponent_lits = literals_of(s.owned_by(Side::Opponent));

    b.add("ORD", build_gadget(GadgetKind::Ordering));
    if (!player_lits.empty()) b.add("CHOICE", build_gadget(GadgetKind::Choice, {std::nullopt, player_lits}));
    if (!opponent_lits.empty()) b.add("RAND", build_gadget(GadgetKind::RandomGadget, {std::nullopt, opponent_lits}));
    std::vector<std::size_t> pt, ot;
    for (std::size_t j = 0; j < s.player_formula.terms.size(); ++j) {
        auto& g = b.add(numbered("PT", j + 1), build_gadget(GadgetKind::ClauseAbes, {std::nullopt, s.player_formula.terms[j]}));
        b.add_slots(g, s.player_formula.terms[j]);
        pt.push_back(r.gadgets.size() - 1);
    }
    for (std::size_t j = 0; j < s.opponent_formula.terms.size(); ++j) {
        auto& g = b.add(numbered("OT", j + 1), build_gadget(GadgetKind::ClauseAbes, {std::nullopt, s.opponent_formula.terms[j]}));
        b.add_slots(g, s.opponent_formula.terms[j]);
        ot.push_back(r.gadgets.size() - 1);
    }
    const auto& res = b.add("RESULT", build_gadget(GadgetKind::Result));
    const Port win = res.port("win_in"), lose = res.port("lose_in");
    r.pig_guard = res.gate("S1");

    const auto& ord = r.gadgets.front();
    auto* choice = r.find_gadget("CHOICE");
    auto* rnd = r.find_gadget("RAND");
    b.connect(ord.port("SP_O"), choice ? Endpoint{choice->port("choice_in")} : Endpoint{Sink::Consume});
    b.connect(ord.port("SO_O"), rnd ? Endpoint{rnd->port("random_in")} : Endpoint{Sink::Consume});

    auto check_chain = [&](Port head, const std::vector<std::size_t>& terms, Port satisfied) {
        b.connect(head, terms.empty() ? Endpoint{Sink::Consume} : Endpoint{r.gadgets[terms.front()].port("check_in")});
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const auto& g = r.gadgets[terms[k]];
            b.connect(g.port("satisfied_out"), satisfied);
            b.connect(g.ports("next_clause_out"),
                      k + 1 < terms.size() ? Endpoint{r.gadgets[terms[k + 1]].port("check_in")} : Endpoint{Sink::Consume});
        }
    };
    check_chain(ord.port("CP_O"), pt, win);
    check_chain(ord.port("CO_O"), ot, lose);

    for (auto [g, lits] : {std::pair{choice, &player_lits}, std::pair{rnd, &opponent_lits}}) {
        if (!g) continue;
        for (std::size_t i = 0; i < lits->size(); ++i)
            b.modify_chain(g->port("modify_literal" + std::to_string(i + 1) + "_out"), (*lits)[i].var, (*lits)[i].positive());
    }
    b.sink_unused_slots();
    const auto init = s.initial_assignment();
    b.set_slot_initials([&](Var v) -> std::optional<bool> { return init.at(v); });
    r.bird_budget = abes_budget(static_cast<int>(s.owned_by(Side::Player).size()), static_cast<int>(s.variables().size()));
    return r;
}

ReductionOutput reduce(Variant v, const SourceProblem& source) {
    switch (v) {
        case Variant::ABPD:
            if (auto* f = std::get_if<CnfFormula>(&source)) return reduce_abpd(*f);
            if (auto* q = std::get_if<QbfFormula>(&source)) return reduce_abpd(q->matrix);
            break;
        case Variant::ABED:
            if (auto* q = std::get_if<QbfFormula>(&source)) return reduce_abed(*q);
            break;
        case Variant::ABPS:
            if (auto* q = std::get_if<QbfFormula>(&source)) return reduce_abps(*q);
            break;
        case Variant::ABES:
            if (auto* s = std::get_if<G2Setup>(&source)) return reduce_abes(*s);
            break;
    }
    throw InvalidArgument(std::string(to_string(v)) + " cannot be built from this kind of input");
}

}  // namespace hardbirds
