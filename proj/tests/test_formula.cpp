#include <doctest.h>

#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "hardbirds/formula.hpp"
#include "support.hpp"

using namespace hardbirds;

namespace {

// Independent TQBF evaluation: fill the 2^n leaves, then fold levels bottom-up.
bool tqbf_by_tree(const QbfFormula& q) {
    const std::size_t n = q.prefix.size();
    std::vector<char> level(std::size_t{1} << n);
    for (std::size_t leaf = 0; leaf < level.size(); ++leaf) {
        Assignment a;
        for (std::size_t d = 0; d < n; ++d) a.set(q.prefix[d].var, (leaf >> (n - 1 - d)) & 1u);
        level[leaf] = eval_cnf(q.matrix, a);
    }
    for (std::size_t d = n; d-- > 0;) {
        std::vector<char> up(level.size() / 2);
        for (std::size_t i = 0; i < up.size(); ++i)
            up[i] = q.prefix[d].quantifier == Quantifier::Exists ? (level[2 * i] || level[2 * i + 1])
                                                                   : (level[2 * i] && level[2 * i + 1]);
        level = std::move(up);
    }
    return level[0];
}

// Independent G2 evaluation: "player wins within d plies" by plain recursion.
bool g2_by_depth(const G2Setup& s) {
    auto vars = s.variables();
    const int positions = 2 << vars.size();
    std::map<std::tuple<std::map<Var, bool>, bool, int>, bool> memo;
    std::function<bool(Assignment, bool, int)> wins = [&](Assignment a, bool player_turn, int depth) -> bool {
        if (depth == 0) return false;
        auto key = std::make_tuple(a.values(), player_turn, depth);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::vector<Assignment> next{a};
        for (Var v : s.owned_by(player_turn ? Side::Player : Side::Opponent)) {
            Assignment b = a;
            b.set(v, !a.at(v));
            next.push_back(b);
        }
        bool result = !player_turn;
        for (const auto& b : next) {
            bool p = eval_dnf(s.player_formula, b), o = eval_dnf(s.opponent_formula, b);
            bool good;
            if (player_turn) good = p || (!o && wins(b, false, depth - 1));
            else good = !o && (p || wins(b, true, depth - 1));
            if (player_turn && good) { result = true; break; }
            if (!player_turn && !good) { result = false; break; }
        }
        memo[key] = result;
        return result;
    };
    return wins(s.initial_assignment(), true, positions + 1);
}

QbfFormula random_qbf(std::mt19937_64& rng, int vars, int clauses) {
    QbfFormula q;
    q.matrix.num_vars = vars;
    std::vector<Var> order(vars);
    for (int i = 0; i < vars; ++i) order[i] = i + 1;
    std::shuffle(order.begin(), order.end(), rng);
    for (Var v : order) q.prefix.push_back({rng() % 2 ? Quantifier::Exists : Quantifier::ForAll, v});
    for (int c = 0; c < clauses; ++c) {
        Clause3 cl;
        for (auto& l : cl) l = Literal{static_cast<Var>(rng() % vars + 1), rng() % 2 ? Polarity::Positive : Polarity::Negative};
        q.matrix.clauses.push_back(cl);
    }
    return q;
}

G2Setup random_g2(std::mt19937_64& rng, int vars) {
    G2Setup s;
    auto term = [&] {
        std::vector<Literal> t;
        int len = 1 + rng() % 3;
        for (int i = 0; i < len; ++i)
            t.push_back(Literal{static_cast<Var>(rng() % vars + 1), rng() % 2 ? Polarity::Positive : Polarity::Negative});
        return t;
    };
    for (int i = 0, n = 1 + rng() % 2; i < n; ++i) s.player_formula.terms.push_back(term());
    for (int i = 0, n = 1 + rng() % 2; i < n; ++i) s.opponent_formula.terms.push_back(term());
    std::set<Var> used;
    for (auto* f : {&s.player_formula, &s.opponent_formula})
        for (auto& t : f->terms)
            for (auto& l : t) used.insert(l.var);
    for (Var v : used) {
        s.ownership[v] = rng() % 2 ? Side::Player : Side::Opponent;
        s.initial_values[v] = rng() % 2;
    }
    return s;
}

}  // namespace

TEST_CASE("parse_cnf reads the six-clause example and pads short clauses") {
    auto f = parse_cnf("p cnf 3 3\n1 2 3 0\n-1 2 -3 0\n-1 -2 -3 0\n");
    CHECK(f.num_vars == 3);
    REQUIRE(f.clauses.size() == 3);
    CHECK(f.clauses[1] == Clause3{Literal::neg(1), Literal::pos(2), Literal::neg(3)});

    auto single = parse_cnf("p cnf 1 1\n1 1 1 0\n");
    CHECK(single.clauses[0] == Clause3{Literal::pos(1), Literal::pos(1), Literal::pos(1)});

    auto padded = parse_cnf("c comment\np cnf 2 1\n1 -2 0\n");
    CHECK(padded.clauses[0] == Clause3{Literal::pos(1), Literal::neg(2), Literal::neg(2)});

    auto spanning = parse_cnf("p cnf 2 1\n1\n-2 0\n");
    CHECK(spanning.clauses[0] == Clause3{Literal::pos(1), Literal::neg(2), Literal::neg(2)});
}

TEST_CASE("parse_cnf reports errors with line numbers") {
    auto line_of = [](const char* text) {
        try {
            parse_cnf(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("p cnf 3 1\n1 2 3 -1 0\n") == 2);
    CHECK(line_of("p cnf 2 1\n\n1 3 0\n") == 3);
    CHECK(line_of("p cnf 2 2\n1 0\n0\n") == 3);
    CHECK(line_of("p cnf 2 1\nx 1 0\n") == 2);
    CHECK(line_of("1 2 0\n") == 1);
    CHECK_THROWS_AS(parse_cnf("p cnf 2 2\n1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_cnf("p cnf 2 1\n1 2\n"), ParseError);
}

TEST_CASE("parse_qbf keeps prefix order") {
    auto q = parse_qbf(read_data("alternating.qdimacs"));
    REQUIRE(q.prefix.size() == 4);
    CHECK(q.prefix[0] == QuantifiedVar{Quantifier::Exists, 1});
    CHECK(q.prefix[1] == QuantifiedVar{Quantifier::ForAll, 2});
    CHECK(q.prefix[2] == QuantifiedVar{Quantifier::Exists, 3});
    CHECK(q.prefix[3] == QuantifiedVar{Quantifier::ForAll, 4});
    CHECK(q.matrix.clauses.size() == 3);
    CHECK(q.universal_count() == 2);
    CHECK(q.existential_count() == 2);

    auto tiny = parse_qbf("p cnf 1 1\ne 1 0\n1 1 1 0\n");
    CHECK(tiny.prefix.size() == 1);
    CHECK(tiny.matrix.clauses.size() == 1);

    auto multi = parse_qbf("p cnf 3 1\na 3 1 0\ne 2 0\n1 2 3 0\n");
    CHECK(multi.prefix == std::vector<QuantifiedVar>{{Quantifier::ForAll, 3}, {Quantifier::ForAll, 1}, {Quantifier::Exists, 2}});
}

TEST_CASE("parse_qbf rejects free and doubly quantified variables") {
    CHECK_THROWS_AS(parse_qbf("p cnf 2 1\ne 1 0\n1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse_qbf("p cnf 2 1\ne 1 0\na 1 2 0\n1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse_qbf("p cnf 2 1\ne 1 2\n1 2 0\n"), ParseError);
}

TEST_CASE("round trips through the text formats") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        auto q = random_qbf(rng, 1 + rng() % 4, rng() % 4);
        auto back = parse_qbf(to_qdimacs(q));
        CHECK(back.prefix == q.prefix);
        CHECK(back.matrix.clauses == q.matrix.clauses);
        auto cnf = parse_cnf(to_dimacs(q.matrix));
        CHECK(cnf.clauses == q.matrix.clauses);
    }
    auto s = parse_g2(read_data("two_each.g2"));
    auto s2 = parse_g2(to_g2_text(s));
    CHECK(s2.ownership == s.ownership);
    CHECK(s2.initial_values == s.initial_values);
    CHECK(s2.player_formula.terms == s.player_formula.terms);
    CHECK(s2.opponent_formula.terms == s.opponent_formula.terms);
}

TEST_CASE("parse_g2 reads the two-player example") {
    auto s = parse_g2(read_data("two_each.g2"));
    // ids by first appearance: x=1 y=2 z=3 w=4
    CHECK(s.names.at(1) == "x");
    CHECK(s.names.at(4) == "w");
    CHECK(s.player_formula.terms.size() == 2);
    CHECK(s.opponent_formula.terms[1] == std::vector<Literal>{Literal::neg(1), Literal::pos(2), Literal::neg(4)});
    CHECK(s.owned_by(Side::Player) == std::vector<Var>{3, 4});
    CHECK(s.owned_by(Side::Opponent) == std::vector<Var>{1, 2});
    for (Var v = 1; v <= 4; ++v) CHECK_FALSE(s.initial_values.at(v));

    auto single = parse_g2("player: z\nopponent: !z\nowns player: z\nowns opponent:\ninit: z=0\n");
    CHECK(single.ownership.size() == 1);
}

TEST_CASE("parse_g2 rejects malformed setups") {
    std::string thirteen = "a1";
    for (int i = 2; i <= 13; ++i) thirteen += " & a" + std::to_string(i);
    std::string owned;
    for (int i = 1; i <= 13; ++i) owned += " a" + std::to_string(i);
    std::string init;
    for (int i = 1; i <= 13; ++i) init += " a" + std::to_string(i) + "=0";
    CHECK_THROWS_AS(parse_g2("player: " + thirteen + "\nopponent: a1\nowns player:" + owned + "\ninit:" + init + "\n"), ParseError);

    CHECK_THROWS_AS(parse_g2("player: x\nopponent: y\nowns player: x y\nowns opponent: y\ninit: x=0 y=0\n"), ParseError);
    CHECK_THROWS_AS(parse_g2("player: x\nopponent: y\nowns player: x\ninit: x=0 y=0\n"), ParseError);
    CHECK_THROWS_AS(parse_g2("player: x\nopponent: y\nowns player: x\nowns opponent: y\ninit: x=0\n"), ParseError);
    CHECK_THROWS_AS(parse_g2("player: x\nopponent: y\nowns player: x\nowns opponent: y\n"), ParseError);
    CHECK_THROWS_AS(parse_g2("player: x &\nopponent: y\nowns player: x\nowns opponent: y\ninit: x=0 y=0\n"), ParseError);
}

TEST_CASE("evaluation") {
    auto f = parse_cnf(read_data("three_var.cnf"));
    Assignment a;
    a.set(1, true);
    a.set(2, true);
    a.set(3, false);
    CHECK(eval_cnf(f, a));
    a.set(3, true);
    CHECK_FALSE(eval_cnf(f, a));

    auto s = parse_g2(read_data("two_each.g2"));
    Assignment b;
    b.set(1, false);
    b.set(2, true);
    b.set(3, false);
    b.set(4, true);
    CHECK(eval_dnf(s.player_formula, b));

    DnfFormula empty_term{{{}}};
    CHECK_THROWS_AS(eval_dnf(empty_term, b), InvalidArgument);
    Assignment partial;
    partial.set(1, true);
    CHECK_THROWS_AS(eval_cnf(f, partial), InvalidArgument);
}

TEST_CASE("tqbf_oracle on fixed instances") {
    CHECK(tqbf_oracle(parse_qbf(read_data("alternating.qdimacs"))));
    CHECK_FALSE(tqbf_oracle(parse_qbf("p cnf 1 1\na 1 0\n1 1 1 0\n")));
    CHECK(tqbf_oracle(parse_qbf("p cnf 2 2\ne 1 0\na 2 0\n1 2 2 0\n1 -2 -2 0\n")));
    CHECK(tqbf_oracle(parse_qbf(read_data("three_universal.qdimacs"))));
}

TEST_CASE("tqbf_oracle agrees with full-tree expansion") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 400; ++i) {
        auto q = random_qbf(rng, 1 + rng() % 4, rng() % 5);
        CHECK(tqbf_oracle(q) == tqbf_by_tree(q));
    }
}

TEST_CASE("sat_oracle") {
    auto f = parse_cnf(read_data("three_var.cnf"));
    REQUIRE(sat_oracle(f));
    CHECK(eval_cnf(f, *sat_oracle(f)));
    Assignment expected;
    expected.set(1, true);
    expected.set(2, true);
    expected.set(3, false);
    auto all = sat_enumerate(f);
    CHECK(std::find(all.begin(), all.end(), expected) != all.end());
    CHECK(all.size() == 5);  // frozen: 001 010 011 100 110

    CHECK_FALSE(sat_oracle(parse_cnf("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n")));
    auto vacuous = sat_oracle(parse_cnf("p cnf 2 0\n"));
    REQUIRE(vacuous);
    CHECK_FALSE(vacuous->at(1));
    CHECK_FALSE(vacuous->at(2));
}

TEST_CASE("satisfying a false clause never lowers truth") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
        auto q = random_qbf(rng, 1 + rng() % 4, 1 + rng() % 4);
        Assignment a;
        for (int v = 1; v <= q.matrix.num_vars; ++v) a.set(v, rng() % 2);
        bool before = eval_cnf(q.matrix, a);
        for (const auto& c : q.matrix.clauses) {
            if (eval_clause(c, a)) continue;
            Assignment b = a;
            b.set(c[0].var, c[0].positive());
            if (before) CHECK(eval_cnf(q.matrix, b));
            CHECK(eval_clause(c, b));
        }
    }
}

TEST_CASE("g2_oracle on fixed setups") {
    // Opponent can pass forever from all-zero, so the player formula is never reached.
    CHECK_FALSE(g2_oracle(parse_g2(read_data("two_each.g2"))));
    CHECK(g2_oracle(parse_g2(read_data("one_move.g2"))));
    // Opponent formula !u already holds after every player move.
    CHECK_FALSE(g2_oracle(parse_g2("player: z & u\nopponent: !u\nowns player: z\nowns opponent: u\ninit: z=0 u=0\n")));
    // Opponent has a forced flip that hands the player a win two moves later.
    auto forced = parse_g2("player: z & u\nopponent: !z & !u\nowns player: z\nowns opponent: u\ninit: z=0 u=1\n");
    CHECK(g2_oracle(forced));
}

TEST_CASE("g2 winning move leads to a win") {
    auto s = parse_g2(read_data("one_move.g2"));
    G2Game g(s);
    auto mv = g.winning_move(s.initial_assignment());
    REQUIRE(mv);
    REQUIRE(*mv);
    CHECK(**mv == Literal::pos(1));
    auto game = parse_g2(read_data("two_each.g2"));
    CHECK_FALSE(G2Game(game).winning_move(game.initial_assignment()));
}

TEST_CASE("g2_oracle agrees with depth-bounded recursion") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
        auto s = random_g2(rng, 1 + rng() % 4);
        CHECK(g2_oracle(s) == g2_by_depth(s));
    }
}

TEST_CASE("g2_oracle is invariant under renaming") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
        auto s = random_g2(rng, 1 + rng() % 4);
        auto vars = s.variables();
        auto perm = vars;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::map<Var, Var> ren;
        for (std::size_t k = 0; k < vars.size(); ++k) ren[vars[k]] = perm[k] + 10;
        G2Setup r;
        for (auto [src, dst] : {std::pair{&s.player_formula, &r.player_formula}, std::pair{&s.opponent_formula, &r.opponent_formula}})
            for (const auto& t : src->terms) {
                std::vector<Literal> nt;
                for (auto l : t) nt.push_back({ren[l.var], l.polarity});
                dst->terms.push_back(nt);
            }
        for (auto [v, side] : s.ownership) r.ownership[ren[v]] = side;
        for (auto [v, b] : s.initial_values) r.initial_values[ren[v]] = b;
        CHECK(g2_oracle(s) == g2_oracle(r));
    }
}

TEST_CASE("certified g2 strategy beats every opponent sequence") {
    std::mt19937_64 rng(21);
    int certified = 0;
    for (int i = 0; i < 150; ++i) {
        auto s = random_g2(rng, 1 + rng() % 3);
        G2Game g(s);
        if (!g.player_forces_win()) continue;
        ++certified;
        const int horizon = 2 << s.variables().size();
        auto opp = s.owned_by(Side::Opponent);
        // every opponent reply sequence, player following winning_move
        std::function<bool(Assignment, int)> beats_all = [&](Assignment a, int plies) -> bool {
            if (plies > horizon) return false;
            auto mv = g.winning_move(a);
            if (!mv) return false;
            if (*mv) a.set((*mv)->var, (*mv)->positive());
            if (eval_dnf(s.player_formula, a)) return true;
            if (eval_dnf(s.opponent_formula, a)) return false;
            std::vector<Assignment> replies{a};
            for (Var v : opp) {
                Assignment b = a;
                b.set(v, !a.at(v));
                replies.push_back(b);
            }
            for (const auto& b : replies) {
                if (eval_dnf(s.opponent_formula, b)) return false;
                if (eval_dnf(s.player_formula, b)) continue;
                if (!beats_all(b, plies + 2)) return false;
            }
            return true;
        };
        CHECK(beats_all(s.initial_assignment(), 0));
    }
    CHECK(certified > 10);
}
