#include <doctest.h>

#include <random>
#include <set>

#include "hardbirds/reducer.hpp"
#include "support.hpp"

using namespace hardbirds;

namespace {

QbfFormula alternating() { return parse_qbf(read_data("alternating.qdimacs")); }
CnfFormula three_var() { return parse_cnf(read_data("three_var.cnf")); }
G2Setup two_each() { return parse_g2(read_data("two_each.g2")); }

std::map<std::string, int> inv(const ReductionOutput& r) {
    std::map<std::string, int> out;
    for (const auto& [k, n] : r.inventory()) out[std::string(to_string(k))] = n;
    return out;
}

// Follows a modify chain through the tunnel table and lists the (gadget, slot) pairs visited.
std::vector<std::string> walk_chain(const ReductionOutput& r, Port from) {
    std::vector<std::string> visited;
    for (int guard = 0; guard < 1000; ++guard) {
        const auto& to = r.circuit.tunnels().at(from);
        auto* p = std::get_if<Port>(&to);
        if (!p) {
            CHECK(std::get<Sink>(to) == Sink::Consume);
            return visited;
        }
        visited.push_back(r.circuit.gate(p->gate).label + (p->name == PortName::LI ? "+" : "-"));
        from = {p->gate, p->name == PortName::LI ? PortName::LO : PortName::RO};
    }
    FAIL("modify chain does not terminate");
    return visited;
}

QbfFormula random_qbf(std::mt19937& rng, int vars, int clauses) {
    QbfFormula q;
    q.matrix.num_vars = vars;
    for (Var v = 1; v <= vars; ++v) q.prefix.push_back({rng() % 2 ? Quantifier::Exists : Quantifier::ForAll, v});
    for (int j = 0; j < clauses; ++j) {
        Clause3 c;
        for (auto& l : c) l = Literal{static_cast<Var>(rng() % vars + 1), rng() % 2 ? Polarity::Positive : Polarity::Negative};
        q.matrix.clauses.push_back(c);
    }
    return q;
}

G2Setup random_g2(std::mt19937& rng, int vars, int terms) {
    G2Setup s;
    for (Var v = 1; v <= vars; ++v) {
        s.ownership[v] = v % 2 ? Side::Player : Side::Opponent;
        s.initial_values[v] = rng() % 2;
    }
    for (auto* f : {&s.player_formula, &s.opponent_formula}) {
        for (int t = 0; t < terms; ++t) {
            std::vector<Literal> term;
            int len = 1 + static_cast<int>(rng() % 4);
            for (int k = 0; k < len; ++k)
                term.push_back({static_cast<Var>(rng() % vars + 1), rng() % 2 ? Polarity::Positive : Polarity::Negative});
            f->terms.push_back(term);
        }
    }
    // every variable must appear somewhere
    for (Var v = 1; v <= vars; ++v) s.player_formula.terms.push_back({Literal::pos(v)});
    return s;
}

std::vector<ReductionOutput> sample_reductions(unsigned seed, int count) {
    std::mt19937 rng(seed);
    std::vector<ReductionOutput> out;
    for (int i = 0; i < count; ++i) {
        int vars = 1 + static_cast<int>(rng() % 5), clauses = static_cast<int>(rng() % 5);
        auto q = random_qbf(rng, vars, clauses);
        out.push_back(reduce_abpd(q.matrix));
        out.push_back(reduce_abed(q));
        out.push_back(reduce_abps(q));
        out.push_back(reduce_abes(random_g2(rng, 1 + static_cast<int>(rng() % 5), static_cast<int>(rng() % 3))));
    }
    return out;
}

}  // namespace

TEST_CASE("inventories of the worked examples") {
    CHECK(inv(reduce_abpd(three_var())) == std::map<std::string, int>{{"EQ", 3}, {"ClauseAbed", 3}});
    CHECK(inv(reduce_abed(alternating())) ==
          std::map<std::string, int>{{"EQ", 2}, {"UQT", 2}, {"UQF", 2}, {"ClauseAbed", 3}, {"Finish", 1}});
    CHECK(inv(reduce_abps(alternating())) == std::map<std::string, int>{{"EQ", 2}, {"UQR", 2}, {"ClauseAbed", 3}});

    auto abes = reduce_abes(two_each());
    CHECK(inv(abes) == std::map<std::string, int>{{"Ordering", 1}, {"Choice", 1}, {"RandomGadget", 1}, {"ClauseAbes", 4}, {"Result", 1}});
    CHECK(abes.gadget("CHOICE").gates.size() == 4);
    CHECK(abes.gadget("RAND").gates.size() == 3);

    auto small = parse_g2("player: x\nopponent: y\nowns player: x\nowns opponent: y\ninit: x=0 y=0\n");
    auto r = reduce_abes(small);
    CHECK(r.gadget("CHOICE").gates.size() == 2);
    CHECK(r.gadget("RAND").gates.size() == 1);
}

TEST_CASE("bird budgets") {
    CHECK(reduce_abpd(three_var()).bird_budget == 9);
    CHECK(reduce_abpd(parse_cnf("p cnf 1 1\n1 1 1 0\n")).bird_budget == 3);
    CHECK(reduce_abed(alternating()).bird_budget == 52);
    CHECK(reduce_abed(parse_qbf("p cnf 1 1\ne 1 0\n1 1 1 0\n")).bird_budget == 3);
    CHECK(reduce_abps(alternating()).bird_budget == 9);
    CHECK(reduce_abes(two_each()).bird_budget == 128);

    // exponential budgets stay exact past 64 bits
    CHECK(abed_budget(1, 0, 70) == BigInt("1180591620717411303424") * 211);
    CHECK(abes_budget(40, 80).str() == (BigInt(84) << 80).str());
    QbfFormula wide;
    wide.matrix.num_vars = 66;
    for (Var v = 1; v <= 66; ++v) wide.prefix.push_back({Quantifier::ForAll, v});
    wide.matrix.clauses.push_back({Literal::pos(1), Literal::pos(2), Literal::pos(3)});
    CHECK(reduce_abed(wide).bird_budget == (BigInt(1 + 3 * 66) << 66));
}

TEST_CASE("entrances match player-facing ports") {
    for (const auto& r : sample_reductions(7, 25)) {
        std::size_t expected = 0;
        for (const auto& g : r.gadgets) expected += g.blueprint.player_facing().size();
        if (r.variant == Variant::ABED && r.inventory().count(GadgetKind::UQF)) ++expected;
        CHECK(r.manifest().size() == expected);
        auto manifest = r.manifest();
        std::set<std::string> names(manifest.begin(), manifest.end());
        CHECK(names.size() == expected);
        std::set<Port> ports;
        for (const auto& [n, p] : r.circuit.entrances()) ports.insert(p);
        CHECK(ports.size() == expected);
    }
    auto r = reduce_abed(alternating());
    CHECK(r.circuit.entrance("UQF_4.A1.LI"));
    CHECK_FALSE(r.circuit.entrance("UQF_2.A1.LI"));
    CHECK(r.circuit.entrance("EQ_1.A1.TI"));
}

TEST_CASE("every reduction validates and tunnels run downward") {
    for (const auto& r : sample_reductions(11, 25)) {
        auto rep = validate_reduction(r);
        std::string findings;
        for (const auto& f : rep.findings) findings += f.message + "; ";
        INFO(to_string(r.variant), " ", findings);
        CHECK(rep.ok());
        std::map<GateId, int> row;
        for (const auto& g : r.gadgets)
            for (auto id : g.gates) row[id] = g.row;
        for (const auto& [from, to] : r.circuit.tunnels())
            if (auto* p = std::get_if<Port>(&to)) CHECK(row.at(p->gate) >= row.at(from.gate));
        // every labeled gadget output is tunneled or sunk
        for (const auto& g : r.gadgets)
            for (const auto& out : g.blueprint.outputs()) CHECK(r.circuit.tunnels().count(Port{g.gate(out.at.role), out.at.port}));
    }
    for (const auto& r : {reduce_abpd(three_var()), reduce_abed(alternating()), reduce_abps(alternating()), reduce_abes(two_each())})
        CHECK(validate_reduction(r).ok());
}

TEST_CASE("ABED framework wiring") {
    auto r = reduce_abed(alternating());
    // innermost universal heads the UQF column
    CHECK(r.gadgets[0].name == "UQF_4");
    CHECK(r.gadgets[1].name == "UQF_2");
    CHECK(r.circuit.tunnels().at(r.gadget("UQF_4").port("next_uqf_out")) == Endpoint{r.gadget("UQF_2").port("enable_in")});
    CHECK(r.circuit.tunnels().at(r.gadget("UQF_2").port("next_uqf_out")) == Endpoint{r.gadget("FINISH").port("pass_in")});
    CHECK(r.circuit.tunnels().at(r.gadget("UQF_2").port("enable_adjacent_out")) == Endpoint{r.gadget("EQ_3").port("enable_in")});
    CHECK(r.circuit.tunnels().at(r.gadget("UQF_4").port("enable_adjacent_out")) == Endpoint{r.gadget("CL_1").port("enable_in")});
    CHECK(r.circuit.tunnels().at(r.gadget("UQF_4").port("enable_chain_out")) == Endpoint{r.gadget("CL_1").port("disable_in")});
    CHECK(r.circuit.tunnels().at(r.gadget("CL_3").port("disable_chain_out")) == Endpoint{r.gadget("FINISH").port("trigger_in")});
    CHECK(r.circuit.tunnels().at(r.gadget("CL_3").ports("enable_next_out")[2]) == Endpoint{r.gadget("FINISH").port("enable_in")});

    // clause (1 2 4), (2 -3 -4), (-1 -2 3): var 2 occurs in all three
    CHECK(walk_chain(r, r.gadget("UQT_2").port("modify_pos_out")) == std::vector<std::string>{"CL_1.S5+", "CL_2.S4+", "CL_3.S5-"});
    CHECK(walk_chain(r, r.gadget("UQF_2").port("modify_neg_out")) == std::vector<std::string>{"CL_1.S5-", "CL_2.S4-", "CL_3.S5+"});
    CHECK(walk_chain(r, r.gadget("EQ_3").port("modify_neg_out")) == std::vector<std::string>{"CL_2.S5+", "CL_3.S6-"});

    // the first quantifier is existential and starts enabled
    auto s = r.circuit.initial_state();
    for (auto role : {"A1", "A2", "S1", "S2"}) CHECK(s.open(r.gadget("EQ_1").gate(role)));
    CHECK(s.open(r.gadget("FINISH").gate("S1")));
    CHECK(r.prelude.empty());
    CHECK(r.pig_guard == r.gadget("FINISH").gate("S1"));

    // a leading universal gets an enabling bird instead
    auto u = reduce_abed(parse_qbf("p cnf 2 1\na 1 0\ne 2 0\n1 2 2 0\n"));
    REQUIRE(u.prelude.size() == 1);
    CHECK(u.prelude[0] == u.gadget("UQT_1").port("enable_in"));

    // no universal: Finish passes to the pig as soon as it is enabled
    auto e = reduce_abed(parse_qbf("p cnf 1 1\ne 1 0\n1 1 1 0\n"));
    CHECK(e.circuit.tunnels().at(e.gadget("FINISH").port("enabled_out")) == Endpoint{e.gadget("FINISH").port("pass_in")});
}

TEST_CASE("ABPD and ABPS wiring") {
    auto d = reduce_abpd(three_var());
    CHECK(d.circuit.tunnels().at(d.gadget("CL_3").ports("enable_next_out")[0]) == Endpoint{Sink::Pig});
    CHECK(d.circuit.tunnels().at(d.gadget("EQ_3").ports("enable_next_out")[1]) == Endpoint{d.gadget("CL_1").port("enable_in")});
    CHECK(walk_chain(d, d.gadget("EQ_1").port("modify_pos_out")) == std::vector<std::string>{"CL_1.S4+", "CL_2.S4-", "CL_3.S4-"});
    CHECK_FALSE(d.pig_guard);

    auto p = reduce_abps(alternating());
    auto s = p.circuit.initial_state();
    // universal literals start as if false: slot open exactly for negative occurrences
    CHECK_FALSE(s.open(p.gadget("CL_1").gate("S5")));  // 2
    CHECK_FALSE(s.open(p.gadget("CL_1").gate("S6")));  // 4
    CHECK(s.open(p.gadget("CL_2").gate("S6")));        // -4
    CHECK(s.open(p.gadget("CL_3").gate("S5")));        // -2
    CHECK_FALSE(s.open(p.gadget("CL_3").gate("S6")));  // 3 is existential
    CHECK(p.setters.at(p.gadget("UQR_2").port("modify_pos_out")).var == 2);

    auto y = reduce_abps(parse_qbf("p cnf 1 1\na 1 0\n1 1 1 0\n"));
    REQUIRE(y.prelude.size() == 1);
    CHECK(y.prelude[0] == y.gadget("UQR_1").port("enable_in"));
}

TEST_CASE("ABES wiring") {
    auto r = reduce_abes(two_each());
    const auto& t = r.circuit.tunnels();
    CHECK(t.at(r.gadget("ORD").port("SP_O")) == Endpoint{r.gadget("CHOICE").port("choice_in")});
    CHECK(t.at(r.gadget("ORD").port("SO_O")) == Endpoint{r.gadget("RAND").port("random_in")});
    CHECK(t.at(r.gadget("ORD").port("CP_O")) == Endpoint{r.gadget("PT_1").port("check_in")});
    CHECK(t.at(r.gadget("ORD").port("CO_O")) == Endpoint{r.gadget("OT_1").port("check_in")});
    CHECK(t.at(r.gadget("PT_2").port("satisfied_out")) == Endpoint{r.gadget("RESULT").port("win_in")});
    CHECK(t.at(r.gadget("OT_1").port("satisfied_out")) == Endpoint{r.gadget("RESULT").port("lose_in")});
    // Choice literal order: !z, z, !w, w (z=3, w=4)
    auto last = r.setters.at(r.gadget("CHOICE").port("modify_literal4_out"));
    CHECK(last.var == 4);
    CHECK(last.value);
    // all variables start false: slots open exactly on negative literals
    auto s = r.circuit.initial_state();
    CHECK_FALSE(s.open(r.gadget("PT_1").gate("S1")));  // x
    CHECK(s.open(r.gadget("PT_1").gate("S2")));        // !y
    CHECK(s.open(r.gadget("OT_2").gate("S3")));        // !w
    CHECK(walk_chain(r, r.gadget("RAND").port("modify_literal2_out")) ==
          std::vector<std::string>{"PT_1.S1+", "PT_2.S1-", "OT_1.S1+", "OT_2.S1-"});
}

TEST_CASE("reduction size grows polynomially") {
    std::mt19937 rng(3);
    double worst = 0;
    for (int n : {4, 8, 16, 32, 64, 128}) {
        auto q = random_qbf(rng, n, 2 * n);
        auto g = random_g2(rng, n, n);
        for (const auto& r : {reduce_abpd(q.matrix), reduce_abed(q), reduce_abps(q), reduce_abes(g)}) {
            double size = static_cast<double>(r.circuit.gate_count() + r.tunnel_count());
            worst = std::max(worst, size / (static_cast<double>(n) * n));
        }
    }
    // c * n^2 with a fixed c across a 32x range of n
    CHECK(worst < 60);
}

TEST_CASE("level geometry") {
    auto r = reduce_abed(alternating());
    PhysicsParams p;
    auto level = annotate_geometry(r, p);
    CHECK(level.apex_height == doctest::Approx(500));
    CHECK(level.strip_width == doctest::Approx(static_cast<double>(r.manifest().size())));
    CHECK(level.slingshot.x == doctest::Approx(level.strip_width));
    CHECK(level.slingshot.y == doctest::Approx(500));
    CHECK(level.pigs.size() == 1);
    REQUIRE(level.bird_count);
    CHECK(level.bird_count->second == 52);
    CHECK(level.bird_list.empty());
    auto inside = [&](double x, double y) { return x >= 0 && y >= 0 && x <= level.width && y <= level.height; };
    CHECK(inside(level.slingshot.x, level.slingshot.y));
    const double strip_y = level.slingshot.y + level.strip_depth;
    for (const auto& b : level.gadgets) {
        CHECK(inside(b.x, b.y));
        CHECK(inside(b.x + b.w, b.y + b.h));
        CHECK(b.y >= strip_y);
    }
    const auto& fin = *std::find_if(level.gadgets.begin(), level.gadgets.end(), [](const Box& b) { return b.name == "FINISH"; });
    CHECK(level.pigs[0].x > fin.x);
    CHECK(level.pigs[0].x < fin.x + fin.w);
    CHECK(level.width < 1000);
    CHECK(level.height < 1000);

    auto d = annotate_geometry(reduce_abpd(three_var()), p);
    CHECK(d.bird_list.size() == 9);
    CHECK_FALSE(d.bird_count);
    CHECK(d.pigs.size() == 1);

    // wide strip pushes the entrances below the slingshot
    PhysicsParams slow{10, 2, 1, 1, 1};
    auto deep = annotate_geometry(r, slow);
    double wt = deep.strip_width;
    CHECK(deep.strip_depth == doctest::Approx(-wt + 10.0 / 4.0 * wt * wt));

    PhysicsParams bad;
    bad.g = 0;
    CHECK_THROWS_AS(annotate_geometry(r, bad), InvalidArgument);
    ReductionOutput empty;
    empty.variant = Variant::ABPD;
    CHECK_THROWS_AS(annotate_geometry(empty, p), InvalidArgument);

    auto text = level_to_json(level, r);
    CHECK(text.find("\"birds\"") != std::string::npos);
    CHECK(text.find("\"52\"") != std::string::npos);
    CHECK(reduction_to_json(r).find("\"manifest\"") != std::string::npos);
}

TEST_CASE("variant names and dispatch") {
    CHECK(variant_from("abed") == Variant::ABED);
    CHECK(variant_from("ABES") == Variant::ABES);
    CHECK_FALSE(variant_from("abxx"));
    CHECK(is_stochastic(Variant::ABPS));
    CHECK_FALSE(is_stochastic(Variant::ABED));
    CHECK_THROWS_AS(reduce(Variant::ABES, SourceProblem{three_var()}), InvalidArgument);
    CHECK(reduce(Variant::ABPD, SourceProblem{alternating()}).inventory().at(GadgetKind::EQ) == 4);
}
