#include <doctest.h>

#include <set>

#include "hardbirds/verify.hpp"

using namespace hardbirds;

namespace {

std::size_t choose(std::size_t n, std::size_t k) {
    std::size_t out = 1;
    for (std::size_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

// Multisets of size c over n kinds.
std::size_t multichoose(std::size_t n, std::size_t c) { return c == 0 ? 1 : choose(n + c - 1, c); }

std::size_t clause_kinds(int vars) { return multichoose(2 * vars, 3); }

}  // namespace

TEST_CASE("CNF enumeration counts clause multisets") {
    std::size_t expected = 0;
    for (int v = 1; v <= 3; ++v)
        for (int c = 0; c <= 3; ++c) expected += multichoose(clause_kinds(v), c);
    auto all = enumerate_cnfs(3, 3);
    CHECK(all.size() == expected);
    CHECK(all.size() == 34315);  // frozen from the closed form above
    std::set<std::string> distinct;
    for (const auto& f : all) distinct.insert(std::to_string(f.num_vars) + ":" + to_string(f));
    CHECK(distinct.size() == all.size());
}

TEST_CASE("QBF enumeration covers every quantifier pattern") {
    std::size_t expected = 0;
    for (int v = 1; v <= 3; ++v)
        for (int c = 0; c <= 2; ++c) expected += (std::size_t{1} << v) * multichoose(clause_kinds(v), c);
    auto all = enumerate_qbfs(3, 2);
    CHECK(all.size() == expected);
    for (const auto& q : all) {
        REQUIRE(q.prefix.size() == static_cast<std::size_t>(q.matrix.num_vars));
        for (std::size_t i = 0; i < q.prefix.size(); ++i) CHECK(q.prefix[i].var == static_cast<Var>(i + 1));
    }
}

TEST_CASE("G2 enumeration yields valid setups only") {
    auto all = enumerate_g2(1, 1);
    CHECK(!all.empty());
    for (const auto& s : all) {
        CHECK_NOTHROW(s.validate());
        CHECK(s.player_formula.terms.size() == 1);
        CHECK(s.opponent_formula.terms.size() == 1);
    }
}

TEST_CASE("reduced sweeps agree with the brute-force oracles") {
    for (auto [v, vars, clauses] : {std::tuple{Variant::ABPD, 2, 2}, {Variant::ABED, 2, 2}, {Variant::ABPS, 2, 2}, {Variant::ABES, 1, 1}}) {
        auto rep = verify_sweep(v, vars, clauses);
        CAPTURE(to_string(v));
        CHECK(rep.checked > 0);
        CHECK(rep.cap_hits == 0);
        CHECK(rep.mismatches.empty());
    }
}

TEST_CASE("a state cap too small for the level is reported, not guessed") {
    SolveOptions opts;
    opts.state_cap = 1;
    auto rep = verify_sweep(Variant::ABED, 1, 1, opts);
    CHECK(rep.cap_hits > 0);
    CHECK_FALSE(rep.ok());
}
