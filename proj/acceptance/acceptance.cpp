// One line per criterion: PASS/FAIL, id, measurement, runtime against its pinned limit.
// Usage: hardbirds_acceptance [criterion ...]; no arguments runs all twelve.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "hardbirds/verify.hpp"
#include "gadget_behavior.hpp"
#include "support.hpp"

using namespace hardbirds;

namespace {

struct Verdict_ {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Verdict_()> run;
};

std::string fmt(double x, int prec = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << x;
    return os.str();
}

// Gate tables row by row: position, entrance -> exit, next position.
struct Row {
    GateKind kind;
    GatePosition pos;
    PortName in, out;
    GatePosition next;
};
const Row kGateTables[] = {
    {GateKind::Selector, kOpen, PortName::TI, PortName::TL, kOpen},
    {GateKind::Selector, kClosed, PortName::TI, PortName::TR, kClosed},
    {GateKind::Selector, kOpen, PortName::LI, PortName::LO, kOpen},
    {GateKind::Selector, kClosed, PortName::LI, PortName::LO, kOpen},
    {GateKind::Selector, kOpen, PortName::RI, PortName::RO, kClosed},
    {GateKind::Selector, kClosed, PortName::RI, PortName::RO, kClosed},
    {GateKind::AUT, kOpen, PortName::TI, PortName::TL, kClosed},
    {GateKind::AUT, kClosed, PortName::TI, PortName::TR, kClosed},
    {GateKind::AUT, kOpen, PortName::LI, PortName::LO, kOpen},
    {GateKind::AUT, kClosed, PortName::LI, PortName::LO, kOpen},
};

Verdict_ gate_conformance() {
    int checked = 0, deviations = 0;
    auto expect = [&](bool ok) { ++checked, deviations += !ok; };
    for (const auto& r : kGateTables) expect(step_gate(r.kind, r.pos, r.in) == GateStep{r.out, r.next});
    // Random: L and R both reachable, Stuck keeps the bird; Crossover paths are fixed
    expect(step_gate(GateKind::Random, {}, PortName::T, RandomResolution::Left) == GateStep{PortName::L, {}});
    expect(step_gate(GateKind::Random, {}, PortName::T, RandomResolution::Right) == GateStep{PortName::R, {}});
    expect(step_gate(GateKind::Random, {}, PortName::T, RandomResolution::Stuck) == GateStep{std::nullopt, {}});
    expect(step_gate(GateKind::Crossover, {}, PortName::DI) == GateStep{PortName::DO, {}});
    expect(step_gate(GateKind::Crossover, {}, PortName::VI) == GateStep{PortName::VO, {}});
    // entrances a gate does not have are rejected rather than routed
    for (auto k : {GateKind::Selector, GateKind::AUT, GateKind::Random, GateKind::Crossover}) {
        for (int p = 0; p <= static_cast<int>(PortName::VO); ++p) {
            auto port = static_cast<PortName>(p);
            if (port_valid_for(k, port) && is_entrance(port)) continue;
            bool threw = false;
            try {
                auto pos = is_stateful(k) ? std::optional{kOpen} : std::nullopt;
                step_gate(k, pos, port, k == GateKind::Random ? std::optional{RandomResolution::Left} : std::nullopt);
            } catch (const InvalidArgument&) {
                threw = true;
            }
            expect(threw);
        }
    }
    return {deviations == 0, std::to_string(checked) + " checks (10 table cells, 5 Random/Crossover outcomes, rest rejected entrances), " +
                                 std::to_string(deviations) + " deviations"};
}

Verdict_ behavior_suite() {
    auto results = check_gadget_behaviors(12);
    long long cases = 0;
    std::size_t violations = 0;
    std::set<std::string> gadgets;
    std::string first;
    for (const auto& r : results) {
        cases += r.cases;
        violations += r.violations.size();
        gadgets.insert(r.gadget);
        if (first.empty() && !r.violations.empty()) first = r.gadget + ": " + r.violations.front();
    }
    std::string d = std::to_string(gadgets.size()) + " gadget kinds, " + std::to_string(results.size()) + " statements, " +
                    std::to_string(cases) + " cases at length 12, " + std::to_string(violations) + " violations";
    if (!first.empty()) d += " (" + first + ")";
    return {violations == 0 && gadgets.size() == std::size(kAllGadgetKinds), d};
}

Verdict_ sweep(Variant v, std::vector<SourceProblem> instances) {
    auto rep = verify_instances(v, instances);
    std::string d = std::to_string(rep.checked) + " instances, " + std::to_string(rep.mismatches.size() - rep.cap_hits) +
                    " mismatches, " + std::to_string(rep.cap_hits) + " cap hits";
    if (!rep.mismatches.empty()) d += " (first: " + rep.mismatches.front() + ")";
    return {rep.ok(), d};
}

template <class T>
std::vector<SourceProblem> as_sources(std::vector<T> xs) {
    return {std::make_move_iterator(xs.begin()), std::make_move_iterator(xs.end())};
}

Verdict_ abed_worked_example() {
    auto q = parse_qbf(read_data("alternating.qdimacs"));
    auto r = reduce_abed(q);
    std::map<GadgetKind, int> want{{GadgetKind::EQ, 2}, {GadgetKind::UQT, 2}, {GadgetKind::UQF, 2}, {GadgetKind::ClauseAbed, 3}, {GadgetKind::Finish, 1}};
    // x positive once, z follows y
    auto policy = framework_policy(r, [](Var v, const Assignment& outer) { return v == 1 ? true : outer.at(2); });
    NoRandomResolver none;
    auto p = play(r, policy, none);
    std::vector<std::string> cycles;
    for (const auto& c : p.final.checks) cycles.push_back(std::string(c.at(2) ? "1" : "0") + (c.at(4) ? "1" : "0"));
    const bool cycles_ok = cycles == std::vector<std::string>{"11", "10", "01", "00"};
    const bool win = p.outcome.status == GameStatus::Win;
    const bool ok = r.bird_budget == 52 && r.inventory() == want && win && p.outcome.shots_used <= 52 && cycles_ok;
    std::string d = "budget " + r.bird_budget.str() + ", inventory " + (r.inventory() == want ? "2 EQ/2 UQT/2 UQF/3 Clause/1 Finish" : "MISMATCH") +
                    ", (y,w) per cycle " + (cycles_ok ? "11 10 01 00" : "WRONG") + ", " + std::string(to_string(p.outcome.status)) + " in " +
                    p.outcome.shots_used.str() + " shots (<= 52; expected 36";
    if (p.outcome.shots_used != 36)
        d += ", deviation " + BigInt(p.outcome.shots_used - 36).str() +
             ": the last UQF's next output feeds the Finish pass entrance directly, so the closing pass costs 2 shots";
    return {ok, d + ")"};
}

Verdict_ abpd_worked_example() {
    auto f = parse_cnf(read_data("three_var.cnf"));
    auto r = reduce_abpd(f);
    Assignment a;
    a.set(1, true), a.set(2, true), a.set(3, false);
    auto shots = script_strategy(r, framework_policy(r, fixed_policy(a)));
    NoRandomResolver none;
    auto out = run_strategy(r, shots, none);
    return {out.status == GameStatus::Win, "x=1 y=1 z=0: " + std::string(to_string(out.status)) + " in " + out.shots_used.str() +
                                               " of " + r.bird_budget.str() + " birds"};
}

Verdict_ abes_worked_example() {
    auto s = parse_g2(read_data("two_each.g2"));
    auto r = reduce_abes(s);
    Var z = 0, w = 0;
    for (const auto& [v, n] : s.names) {
        if (n == "z") z = v;
        if (n == "w") w = v;
    }
    // w positive first, then z positive, then keep passing
    MovePolicy move = [z, w](const Assignment& cur) -> std::optional<Literal> {
        if (!cur.at(w)) return Literal::pos(w);
        if (!cur.at(z)) return Literal::pos(z);
        return std::nullopt;
    };
    auto all = play_all_resolutions(r, g2_policy(r, move), static_cast<std::size_t>(r.bird_budget));
    std::string d = "budget " + r.bird_budget.str() + ", policy " + (all.all_win ? "wins" : "loses") + " over " +
                    std::to_string(all.leaves) + " resolution leaves";
    if (!all.all_win) {
        d += "; losing line: ";
        for (std::size_t i = 0; i < all.losing_transcript.size() && i < 8; ++i) {
            const auto& t = all.losing_transcript[i];
            d += t.target;
            for (auto x : t.resolutions) d += "/" + std::string(to_string(x)).substr(0, 1);
            d += " ";
        }
        d += "... (G2 oracle: " + std::string(g2_oracle(s) ? "player 1 wins" : "player 1 cannot force a win") +
             "; the opponent may re-assert a current value or the Random gate may stick)";
    }
    return {all.all_win && r.bird_budget == 128, d};
}

Verdict_ uqvc_order() {
    auto q = parse_qbf(read_data("three_universal.qdimacs"));
    auto r = reduce_abed(q);
    NoRandomResolver none;
    auto p = play(r, framework_policy(r, tqbf_policy(q)), none);
    std::string seen;
    for (const auto& a : p.final.checks) seen += std::string(seen.empty() ? "" : " ") + (a.at(1) ? "1" : "0") + (a.at(2) ? "1" : "0") + (a.at(3) ? "1" : "0");
    const std::string want = "111 110 101 100 011 010 001 000";
    return {seen == want && p.outcome.status == GameStatus::Win, "checks at " + seen};
}

Verdict_ polynomiality() {
    std::mt19937 rng(2024);
    std::vector<double> c;
    std::string d = "c_n = gates/n^2:";
    for (int n : {4, 8, 16, 32}) {
        double worst = 0;
        for (int rep = 0; rep < 5; ++rep) {
            QbfFormula q;
            q.matrix.num_vars = n;
            for (Var v = 1; v <= n; ++v) q.prefix.push_back({rng() % 2 ? Quantifier::Exists : Quantifier::ForAll, v});
            for (int j = 0; j < n; ++j) {
                Clause3 cl;
                for (auto& l : cl) l = Literal{static_cast<Var>(rng() % n + 1), rng() % 2 ? Polarity::Positive : Polarity::Negative};
                q.matrix.clauses.push_back(cl);
            }
            worst = std::max(worst, static_cast<double>(reduce_abed(q).circuit.gate_count()) / (n * n));
        }
        c.push_back(worst);
        d += " " + std::to_string(n) + ":" + fmt(worst, 2);
    }
    bool ok = true;
    for (std::size_t i = 1; i < c.size(); ++i) ok = ok && c[i] <= 2.0 * c[i - 1];
    return {ok, d + " (each c_2n <= 2 c_n)"};
}

Verdict_ monotonicity() {
    std::mt19937 rng(99);
    int flips = 0, solvable = 0, total = 0;
    auto check = [&](const ReductionOutput& r) {
        ++total;
        SolveOptions base, doubled;
        base.budget_override = r.bird_budget;
        doubled.budget_override = r.bird_budget * 2;
        bool a = solve(r, base).verdict == Verdict::Solvable;
        bool b = solve(r, doubled).verdict == Verdict::Solvable;
        solvable += a;
        flips += a && !b;
    };
    auto rand_lit = [&](int vars) { return Literal{static_cast<Var>(rng() % vars + 1), rng() % 2 ? Polarity::Positive : Polarity::Negative}; };
    for (int i = 0; i < 25; ++i) {
        const int vars = 1 + rng() % 3;
        QbfFormula q;
        q.matrix.num_vars = vars;
        for (Var v = 1; v <= vars; ++v) q.prefix.push_back({rng() % 2 ? Quantifier::Exists : Quantifier::ForAll, v});
        for (int j = 0, n = 1 + rng() % 3; j < n; ++j) q.matrix.clauses.push_back({rand_lit(vars), rand_lit(vars), rand_lit(vars)});
        check(reduce_abpd(q.matrix));
        check(reduce_abed(q));
        check(reduce_abps(q));
        G2Setup s;
        s.ownership = {{1, Side::Player}, {2, Side::Opponent}};
        s.initial_values = {{1, rng() % 2 == 1}, {2, rng() % 2 == 1}};
        s.player_formula.terms = {{Literal::pos(1), rand_lit(2)}};
        s.opponent_formula.terms = {{rand_lit(2), Literal{2, rng() % 2 ? Polarity::Positive : Polarity::Negative}}};
        check(reduce_abes(s));
    }
    return {flips == 0 && total == 100, std::to_string(total) + " instances, " + std::to_string(solvable) + " solvable at budget b, " +
                                            std::to_string(flips) + " lost at 2b"};
}

std::vector<Criterion> criteria() {
    return {
        {1, "gate conformance", 1, gate_conformance},
        {2, "gadget behavior suite", 60, behavior_suite},
        {3, "ABPD oracle equivalence", 600, [] { return sweep(Variant::ABPD, as_sources(enumerate_cnfs(3, 3))); }},
        {4, "ABED oracle equivalence", 1800, [] { return sweep(Variant::ABED, as_sources(enumerate_qbfs(3, 2))); }},
        {5, "ABPS oracle equivalence", 1800, [] { return sweep(Variant::ABPS, as_sources(enumerate_qbfs(3, 2))); }},
        {6, "ABES oracle equivalence", 1800,
         [] {
             auto xs = as_sources(enumerate_g2(1, 1));
             xs.emplace_back(parse_g2(read_data("two_each.g2")));
             return sweep(Variant::ABES, std::move(xs));
         }},
        {7, "ABED worked example", 60, abed_worked_example},
        {8, "ABPD worked example", 60, abpd_worked_example},
        {9, "ABES worked example", 60, abes_worked_example},
        {10, "UQVC enumeration order", 60, uqvc_order},
        {11, "polynomial size", 60, polynomiality},
        {12, "budget monotonicity", 600, monotonicity},
    };
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    int failed = 0;
    for (const auto& c : criteria()) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        auto t0 = std::chrono::steady_clock::now();
        Verdict_ v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = v.pass && s < c.limit_s;
        failed += !pass;
        std::printf("%s  %2d  %-24s  %s  [%ss, limit %gs]\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), fmt(s).c_str(), c.limit_s);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
