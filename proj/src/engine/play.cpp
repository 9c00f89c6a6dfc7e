#include <map>
#include <memory>

#include "engine_internal.hpp"
#include "hardbirds/engine.hpp"

namespace hardbirds {

namespace {

bool is_open(const PlayContext& c, const GadgetInstance& g, const char* role) { return c.state.gates.open(g.gate(role)); }

std::string target(const GadgetInstance& g, const char* role, const char* port) { return g.name + "." + role + "." + port; }

const QbfFormula* qbf_of(const ReductionOutput& r) { return std::get_if<QbfFormula>(&r.source); }

bool is_universal(const ReductionOutput& r, Var v) {
    if (auto* q = qbf_of(r))
        for (const auto& qv : q->prefix)
            if (qv.var == v) return qv.quantifier == Quantifier::ForAll;
    return false;
}

Assignment outer_values(const ReductionOutput& r, const Assignment& values, Var v) {
    Assignment out;
    auto* q = qbf_of(r);
    if (!q) return out;
    for (const auto& qv : q->prefix) {
        if (qv.var == v) break;
        if (auto x = values.get(qv.var)) out.set(qv.var, *x);
    }
    return out;
}

}  // namespace

PlayContext initial_context(const ReductionOutput& r, const SimState& start) {
    PlayContext c{start, {}, {}, {}};
    if (r.variant == Variant::ABPS)
        for (const auto& qv : std::get<QbfFormula>(r.source).prefix)
            if (qv.quantifier == Quantifier::ForAll) c.values.set(qv.var, false);
    if (r.variant == Variant::ABES) c.values = std::get<G2Setup>(r.source).initial_assignment();
    return c;
}

namespace {

void advance(const ReductionOutput& r, PlayContext& c, FireResult&& res) {
    // universal values as they stand when the first clause gadget is checked
    if (res.record.target.rfind("CL_1.S", 0) == 0) {
        Assignment u;
        for (const auto& [v, x] : c.values.values())
            if (is_universal(r, v)) u.set(v, x);
        c.checks.push_back(u);
    }
    for (const auto& a : res.record.assigned) c.values.set(a.var, a.value);
    c.state = std::move(res.state);
}

}  // namespace

Policy framework_policy(const ReductionOutput& r, ExistentialPolicy choose) {
    if (r.variant == Variant::ABES) throw InvalidArgument("framework_policy does not apply to ABES");
    std::vector<const GadgetInstance*> uqfs, main;
    for (const auto& g : r.gadgets) (g.blueprint.kind == GadgetKind::UQF ? uqfs : main).push_back(&g);
    std::optional<std::string> first_uqf;
    if (!uqfs.empty()) first_uqf = target(*uqfs.front(), "A1", "LI");

    return [&r, choose = std::move(choose), uqfs, main, first_uqf](const PlayContext& c) -> std::optional<std::string> {
        for (const auto* g : uqfs) {
            if (is_open(c, *g, "A3")) return target(*g, "A3", "TI");
            if (is_open(c, *g, "A1") && is_open(c, *g, "S1") && is_open(c, *g, "S2"))
                return is_open(c, *g, "A2") ? target(*g, "S1", "TI") : target(*g, "A1", "TI");
        }
        // The active gadget is the lowest one still expecting a shot: clause gadgets stay
        // enabled after their check until the disable chain runs.
        for (auto it = main.rbegin(); it != main.rend(); ++it) {
            const auto& g = **it;
            switch (g.blueprint.kind) {
                case GadgetKind::EQ:
                    if (is_open(c, g, "A3")) return target(g, "A3", "TI");
                    if (is_open(c, g, "A4")) return target(g, "A4", "TI");
                    if (is_open(c, g, "A1") && is_open(c, g, "A2") && is_open(c, g, "S1") && is_open(c, g, "S2")) {
                        Var v = *g.blueprint.params.var;
                        return choose(v, outer_values(r, c.values, v)) ? target(g, "A1", "TI") : target(g, "A2", "TI");
                    }
                    break;
                case GadgetKind::UQT:
                case GadgetKind::UQR:
                    if (is_open(c, g, "A1")) return target(g, "A1", "TI");
                    break;
                case GadgetKind::ClauseAbed:
                    if (is_open(c, g, "S1") && is_open(c, g, "S2") && is_open(c, g, "S3")) {
                        for (int k = 1; k <= 3; ++k)
                            if (c.state.gates.open(g.gate("S" + std::to_string(k + 3))))
                                return g.name + ".S" + std::to_string(k) + ".TI";
                        return std::nullopt;  // no true literal: the chosen values fail this clause
                    }
                    break;
                case GadgetKind::Finish:
                    if (is_open(c, g, "A1") && is_open(c, g, "S1") && first_uqf) return *first_uqf;
                    break;
                default: break;
            }
        }
        return std::nullopt;
    };
}

ExistentialPolicy tqbf_policy(const QbfFormula& q) {
    return [q](Var v, const Assignment& outer) {
        std::size_t i = 0;
        while (i < q.prefix.size() && q.prefix[i].var != v) ++i;
        if (i == q.prefix.size()) throw InvalidArgument("variable " + std::to_string(v) + " is not quantified");
        for (std::size_t k = 0; k < i; ++k)
            if (!outer.contains(q.prefix[k].var)) throw InvalidArgument("policy undefined: earlier variables are unset");
        Assignment a = outer;
        a.set(v, true);
        return tqbf_suffix(q, i + 1, a);
    };
}

ExistentialPolicy fixed_policy(const Assignment& values) {
    return [values](Var v, const Assignment&) { return values.at(v); };
}

Policy g2_policy(const ReductionOutput& r, MovePolicy move) {
    if (r.variant != Variant::ABES) throw InvalidArgument("g2_policy needs an ABES reduction");
    const auto& setup = std::get<G2Setup>(r.source);
    const auto* choice = r.find_gadget("CHOICE");
    std::vector<Literal> slots = choice ? choice->blueprint.params.literals : std::vector<Literal>{};
    const auto player_vars = setup.owned_by(Side::Player);
    const std::string sp = "ORD.X1.TI", cp = "ORD.X2.TI", so = "ORD.X1.RI", co = "ORD.X3.TI";

    return [=, move = std::move(move)](const PlayContext& c) -> std::optional<std::string> {
        switch (*c.state.ordering_phase) {
            case OrderingPhase::OpponentMoved: return co;
            case OrderingPhase::PlayerMoved: {
                // check our own formula once, then hand the move over
                return c.last_shot == cp ? so : cp;
            }
            case OrderingPhase::Ready: break;
        }
        if (!choice) return sp;
        auto lit = move(c.values);
        // passing = re-asserting a literal that already holds
        if (!lit) lit = c.values.at(player_vars.front()) ? Literal::pos(player_vars.front()) : Literal::neg(player_vars.front());
        auto k = std::find(slots.begin(), slots.end(), *lit) - slots.begin();
        if (k == static_cast<std::ptrdiff_t>(slots.size())) throw InvalidArgument("move " + to_string(*lit) + " is not the player's");
        for (std::ptrdiff_t i = 0; i < k; ++i)
            if (!c.state.gates.open(choice->gates[i])) return choice->name + ".A" + std::to_string(i + 1) + ".LI";
        return sp;
    };
}

MovePolicy g2_oracle_policy(const G2Setup& s) {
    auto game = std::make_shared<G2Game>(s);
    return [game](const Assignment& a) -> std::optional<Literal> {
        auto m = game->winning_move(a);
        if (!m) return std::nullopt;
        return *m;
    };
}

namespace {

void step(const ReductionOutput& r, PlayContext& c, FireResult&& res) {
    c.last_shot = res.record.target;
    advance(r, c, std::move(res));
}

PlayContext start_context(const ReductionOutput& r, const detail::Start& st) {
    auto c = initial_context(r, st.state);
    for (const auto& a : st.assigned) c.values.set(a.var, a.value);
    return c;
}

}  // namespace

PlayResult play(const ReductionOutput& r, const Policy& policy, Resolver& resolver) {
    PlayResult out{{}, {}, start_context(r, detail::run_prelude(r, resolver))};
    BigInt used = 0;
    while (status_of(out.final.state, used).status == GameStatus::Ongoing) {
        auto shot = policy(out.final);
        if (!shot) break;
        auto res = fire(r, out.final.state, *shot, resolver);
        out.transcript.push_back(res.record);
        step(r, out.final, std::move(res));
        ++used;
    }
    out.outcome = status_of(out.final.state, used);
    if (out.outcome.status == GameStatus::Ongoing) out.outcome.status = GameStatus::Loss;
    return out;
}

namespace {

struct Explorer {
    const ReductionOutput& r;
    const Policy& policy;
    std::size_t max_shots;
    std::size_t leaf_cap;
    AllResolutionsResult result;
    std::vector<ShotRecord> path;
    // policies see only the state, the values and the last shot, so equal keys have equal subtrees
    std::map<std::string, std::pair<bool, std::size_t>> memo;

    std::pair<bool, std::size_t> leaf(bool win) {
        ++result.leaves;
        if (leaf_cap && result.leaves > leaf_cap) throw InvalidArgument("resolution tree exceeds the leaf cap");
        if (!win && result.all_win) {
            result.all_win = false;
            result.losing_transcript = path;
        }
        return {win, 0};
    }

    // (every branch wins, longest branch in shots)
    std::pair<bool, std::size_t> walk(const PlayContext& c) {
        auto st = status_of(c.state, path.size()).status;
        if (st != GameStatus::Ongoing) return leaf(st == GameStatus::Win);
        if (path.size() >= max_shots) return leaf(false);
        std::string key = c.state.serialize() + "|" + std::to_string(path.size()) + "|" + c.last_shot + "|";
        for (const auto& [v, x] : c.values.values()) key += std::to_string(v) + (x ? "+" : "-");
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        auto shot = policy(c);
        if (!shot) return memo[key] = leaf(false);
        Port port = detail::shot_port(r, c.state, *shot);
        std::pair<bool, std::size_t> out{true, 0};
        for (auto& f : enumerate_flights(r.circuit, c.state.gates, port)) {
            auto res = detail::apply_flight(r, c.state, *shot, std::move(f));
            path.push_back(res.record);
            PlayContext next = c;
            step(r, next, std::move(res));
            auto [win, depth] = walk(next);
            path.pop_back();
            out.first = out.first && win;
            out.second = std::max(out.second, depth + 1);
        }
        return memo[key] = out;
    }
};

}  // namespace

AllResolutionsResult play_all_resolutions(const ReductionOutput& r, const Policy& policy, std::size_t max_shots,
                                          std::size_t leaf_cap) {
    Explorer ex{r, policy, max_shots, leaf_cap, {}, {}, {}};
    for (const auto& st : detail::enumerate_preludes(r)) ex.result.max_shots = std::max(ex.result.max_shots, BigInt(ex.walk(start_context(r, st)).second));
    return ex.result;
}

std::vector<std::string> script_strategy(const ReductionOutput& r, const Policy& policy) {
    if (is_stochastic(r.variant)) throw InvalidArgument("script_strategy needs a deterministic variant");
    NoRandomResolver none;
    auto res = play(r, policy, none);
    std::vector<std::string> out;
    for (const auto& t : res.transcript) out.push_back(t.target);
    return out;
}

}  // namespace hardbirds
