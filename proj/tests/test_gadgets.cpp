#include <doctest.h>

#include "hardbirds/gadgets.hpp"
#include "gadget_behavior.hpp"

using namespace hardbirds;

namespace {

std::vector<GatePosition> positions(const GadgetBlueprint& b, std::initializer_list<const char*> open_roles) {
    std::vector<GatePosition> p(b.gates.size(), kClosed);
    for (auto r : open_roles) p[b.role_index(r)] = kOpen;
    return p;
}

const BehaviorRow* find_row(const BehaviorTable& t, const std::vector<GatePosition>& full, const std::string& input) {
    std::vector<GatePosition> cur;
    for (std::size_t i = 0; i < t.blueprint.gates.size(); ++i)
        if (is_stateful(t.blueprint.gates[i].kind)) cur.push_back(full[i]);
    for (const auto& r : t.rows)
        if (r.current == cur && r.input == input) return &r;
    return nullptr;
}

}  // namespace

TEST_CASE("gadget shapes") {
    auto eq = build_gadget(GadgetKind::EQ, {1, {}});
    CHECK(eq.gates.size() == 6);
    CHECK(eq.player_facing().size() == 4);
    CHECK(eq.ports_named("enable_next_out").size() == 2);

    auto term = build_gadget(GadgetKind::ClauseAbes, {std::nullopt, {Literal::pos(1), Literal::neg(2), Literal::pos(3)}});
    CHECK(term.gates.size() == 3);
    for (const auto& g : term.gates) CHECK(g.kind == GateKind::Selector);

    auto rnd = build_gadget(GadgetKind::RandomGadget, {std::nullopt, {Literal::pos(1), Literal::neg(1), Literal::pos(2), Literal::neg(2)}});
    CHECK(rnd.gates.size() == 3);
    CHECK(rnd.outputs().size() == 4);

    auto fin = build_gadget(GadgetKind::Finish);
    CHECK(fin.player_facing().empty());
    CHECK(fin.gates[fin.role_index("S1")].initial == kOpen);
    CHECK(fin.gates[fin.role_index("A1")].initial == kClosed);
    CHECK(build_gadget(GadgetKind::Result).gates[0].initial == kOpen);
    CHECK(build_gadget(GadgetKind::Ordering).player_facing().size() == 4);
}

TEST_CASE("gadget parameter errors") {
    CHECK_THROWS_AS(build_gadget(GadgetKind::EQ), InvalidArgument);
    CHECK_THROWS_AS(build_gadget(GadgetKind::ClauseAbed, {std::nullopt, {Literal::pos(1)}}), InvalidArgument);
    CHECK_THROWS_AS(build_gadget(GadgetKind::ClauseAbes, {std::nullopt, {}}), InvalidArgument);
    std::vector<Literal> thirteen(13, Literal::pos(1));
    CHECK_THROWS_AS(build_gadget(GadgetKind::ClauseAbes, {std::nullopt, thirteen}), InvalidArgument);
    CHECK_THROWS_AS(build_gadget(GadgetKind::Choice, {std::nullopt, {Literal::pos(1), Literal::pos(1)}}), InvalidArgument);
    CHECK_THROWS_AS(build_gadget(GadgetKind::RandomGadget, {std::nullopt, {Literal::pos(1)}}), InvalidArgument);
}

TEST_CASE("gadget state predicates") {
    auto eq = build_gadget(GadgetKind::EQ, {1, {}});
    CHECK(std::get<EqState>(gadget_state(eq, positions(eq, {"A1", "A2", "S1", "S2"}))).enabled);
    CHECK_FALSE(std::get<EqState>(gadget_state(eq, positions(eq, {"A1", "A2", "S1"}))).enabled);

    auto fin = build_gadget(GadgetKind::Finish);
    CHECK(std::get<FinishState>(gadget_state(fin, positions(fin, {"A1"}))).status == FinishStatus::Unsolvable);
    CHECK(std::get<FinishState>(gadget_state(fin, positions(fin, {}))).status == FinishStatus::Unsolvable);
    CHECK(std::get<FinishState>(gadget_state(fin, positions(fin, {"S1"}))).status == FinishStatus::Disabled);
    CHECK(std::get<FinishState>(gadget_state(fin, positions(fin, {"A1", "S1"}))).status == FinishStatus::Enabled);

    auto uqf = build_gadget(GadgetKind::UQF, {1, {}});
    CHECK(std::get<UqfState>(gadget_state(uqf, positions(uqf, {"A2"}))) == UqfState{false, true});

    auto cl = build_gadget(GadgetKind::ClauseAbed, {std::nullopt, {Literal::pos(1), Literal::pos(2), Literal::pos(3)}});
    CHECK(std::get<ClauseAbedState>(gadget_state(cl, positions(cl, {"S5"}))) == ClauseAbedState{false, true});

    auto ch = build_gadget(GadgetKind::Choice, {std::nullopt, {Literal::neg(1), Literal::pos(1), Literal::neg(2)}});
    CHECK(std::get<ChoiceState>(gadget_state(ch, positions(ch, {"A1", "A2"}))).open_prefix == 2);
    CHECK(describe(gadget_state(ch, positions(ch, {"A2"}))) == "open-prefix=0");
}

TEST_CASE("propagation through an enabled EQ gadget") {
    StandaloneGadget g(build_gadget(GadgetKind::EQ, {1, {}}));
    auto s = g.state_from(positions(g.blueprint, {"A1", "A2", "S1", "S2"}));
    NoRandomResolver none;
    auto f = propagate_bird(g.circuit, s, "set_pos_in", none);
    CHECK(f.outcome.exit_name == "modify_pos_out");
    auto after = g.positions_of(f.state);
    CHECK(after[g.blueprint.role_index("A1")] == kClosed);
    CHECK(after[g.blueprint.role_index("S2")] == kClosed);
    CHECK(after[g.blueprint.role_index("A3")] == kOpen);
    CHECK(validate_circuit(g.circuit).ok());
}

TEST_CASE("behavior tables") {
    auto eq = build_gadget(GadgetKind::EQ, {1, {}});
    auto t = enumerate_gadget_behavior(eq);
    CHECK(t.rows.size() == 64 * 5);
    auto* row = find_row(t, positions(eq, {"A1", "A2", "S1", "S2"}), "set_pos_in");
    REQUIRE(row);
    CHECK(row->output == "modify_pos_out");

    auto uqt = enumerate_gadget_behavior(build_gadget(GadgetKind::UQT, {1, {}}));
    CHECK(uqt.rows.size() == 4);

    auto uqf_b = build_gadget(GadgetKind::UQF, {1, {}});
    auto uqf = enumerate_gadget_behavior(uqf_b);
    auto* r2 = find_row(uqf, positions(uqf_b, {"A1", "S1", "S2", "A2"}), "next_in");
    REQUIRE(r2);
    CHECK(r2->output == "next_uqf_out");
    auto next = r2->next;
    // stateful order is S1 S2 A1 A2 A3
    CHECK(next[1] == kClosed);
    CHECK(next[3] == kClosed);

    auto uqr = enumerate_gadget_behavior(build_gadget(GadgetKind::UQR, {1, {}}));
    CHECK(uqr.rows.size() == 2 * 3 + 2);

    auto text = format_behavior_table(uqt);
    CHECK(text.find("UQT (4 rows)") == 0);
    CHECK(text.find("enable_in") != std::string::npos);

    std::vector<Literal> many;
    for (int i = 1; i <= 12; ++i) many.push_back(Literal::pos(i));
    many.push_back(Literal::neg(1));
    many.push_back(Literal::neg(2));
    many.push_back(Literal::neg(3));
    many.push_back(Literal::neg(4));
    many.push_back(Literal::neg(5));
    many.push_back(Literal::neg(6));
    many.push_back(Literal::neg(7));
    many.push_back(Literal::neg(8));
    CHECK_THROWS_AS(enumerate_gadget_behavior(build_gadget(GadgetKind::Choice, {std::nullopt, many})), InvalidArgument);
}

TEST_CASE("ordering automaton") {
    using Ph = OrderingPhase;
    using In = OrderingInput;
    CHECK(ordering_step(Ph::Ready, In::SP) == Ph::PlayerMoved);
    CHECK(ordering_step(Ph::Ready, In::CP) == std::nullopt);
    CHECK(ordering_step(Ph::PlayerMoved, In::SP) == std::nullopt);
    CHECK(ordering_step(Ph::PlayerMoved, In::CO) == std::nullopt);
    CHECK(ordering_step(Ph::PlayerMoved, In::SO) == Ph::OpponentMoved);
    CHECK(ordering_step(Ph::OpponentMoved, In::SO) == Ph::OpponentMoved);
    CHECK(ordering_step(Ph::OpponentMoved, In::CP) == std::nullopt);
    CHECK(ordering_step(Ph::OpponentMoved, In::CO) == Ph::Ready);
}

TEST_CASE("gadget behavior claims hold over short sequences") {
    for (const auto& r : check_gadget_behaviors(8)) {
        INFO(r.gadget << ": " << r.statement);
        for (const auto& v : r.violations) INFO(v);
        CHECK(r.violations.empty());
        CHECK(r.cases > 0);
    }
}
