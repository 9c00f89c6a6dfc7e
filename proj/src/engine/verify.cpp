#include "hardbirds/verify.hpp"

namespace hardbirds {

namespace {

// Every nondecreasing sequence of length k over [0, n).
void multisets(int n, int k, const std::function<void(const std::vector<int>&)>& emit) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int from) {
        if (static_cast<int>(cur.size()) == k) return emit(cur);
        for (int i = from; i < n; ++i) {
            cur.push_back(i);
            rec(i);
            cur.pop_back();
        }
    };
    rec(0);
}

std::vector<Clause3> all_clauses(int vars) {
    std::vector<Literal> lits;
    for (Var v = 1; v <= vars; ++v) lits.push_back(Literal::pos(v)), lits.push_back(Literal::neg(v));
    std::vector<Clause3> out;
    multisets(static_cast<int>(lits.size()), 3, [&](const std::vector<int>& m) { out.push_back({lits[m[0]], lits[m[1]], lits[m[2]]}); });
    return out;
}

}  // namespace

std::vector<CnfFormula> enumerate_cnfs(int max_vars, int max_clauses) {
    std::vector<CnfFormula> out;
    for (int v = 1; v <= max_vars; ++v) {
        auto clauses = all_clauses(v);
        for (int c = 0; c <= max_clauses; ++c) {
            multisets(static_cast<int>(clauses.size()), c, [&](const std::vector<int>& m) {
                CnfFormula f{v, {}};
                for (int i : m) f.clauses.push_back(clauses[i]);
                out.push_back(std::move(f));
            });
        }
    }
    return out;
}

std::vector<QbfFormula> enumerate_qbfs(int max_vars, int max_clauses) {
    std::vector<QbfFormula> out;
    for (int v = 1; v <= max_vars; ++v) {
        auto clauses = all_clauses(v);
        for (unsigned pattern = 0; pattern < (1u << v); ++pattern) {
            std::vector<QuantifiedVar> prefix;
            for (Var x = 1; x <= v; ++x)
                prefix.push_back({(pattern >> (x - 1)) & 1u ? Quantifier::ForAll : Quantifier::Exists, x});
            for (int c = 0; c <= max_clauses; ++c) {
                multisets(static_cast<int>(clauses.size()), c, [&](const std::vector<int>& m) {
                    QbfFormula q{prefix, {v, {}}};
                    for (int i : m) q.matrix.clauses.push_back(clauses[i]);
                    out.push_back(std::move(q));
                });
            }
        }
    }
    return out;
}

std::vector<G2Setup> enumerate_g2(int max_per_side, int terms) {
    std::vector<G2Setup> out;
    for (int np = 0; np <= max_per_side; ++np) {
        for (int no = 0; no <= max_per_side; ++no) {
            const int n = np + no;
            if (n == 0) continue;
            std::vector<Literal> lits;
            for (Var v = 1; v <= n; ++v) lits.push_back(Literal::pos(v)), lits.push_back(Literal::neg(v));
            std::vector<std::vector<Literal>> term_choices;
            for (unsigned mask = 1; mask < (1u << lits.size()); ++mask) {
                std::vector<Literal> t;
                for (std::size_t i = 0; i < lits.size(); ++i)
                    if ((mask >> i) & 1u) t.push_back(lits[i]);
                if (t.size() <= DnfFormula::kMaxTermLength) term_choices.push_back(t);
            }
            const int k = static_cast<int>(term_choices.size());
            // player terms and opponent terms, each a multiset of `terms` term choices
            multisets(k, terms, [&](const std::vector<int>& pm) {
                multisets(k, terms, [&](const std::vector<int>& om) {
                    for (unsigned init = 0; init < (1u << n); ++init) {
                        G2Setup s;
                        for (int i : pm) s.player_formula.terms.push_back(term_choices[i]);
                        for (int i : om) s.opponent_formula.terms.push_back(term_choices[i]);
                        for (Var v = 1; v <= n; ++v) {
                            s.ownership[v] = v <= np ? Side::Player : Side::Opponent;
                            s.initial_values[v] = (init >> (v - 1)) & 1u;
                        }
                        try {
                            s.validate();
                        } catch (const InvalidArgument&) {
                            continue;  // some owned variable appears in neither formula
                        }
                        out.push_back(std::move(s));
                    }
                });
            });
        }
    }
    return out;
}

bool source_oracle(Variant v, const SourceProblem& p) {
    switch (v) {
        case Variant::ABPD:
            if (auto* f = std::get_if<CnfFormula>(&p)) return sat_oracle(*f).has_value();
            return sat_oracle(std::get<QbfFormula>(p).matrix).has_value();
        case Variant::ABED:
        case Variant::ABPS: return tqbf_oracle(std::get<QbfFormula>(p));
        case Variant::ABES: return g2_oracle(std::get<G2Setup>(p));
    }
    return false;
}

std::string describe_source(const SourceProblem& p) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, G2Setup>) return to_string(x);
            else return to_string(x);
        },
        p);
}

SweepReport verify_instances(Variant v, const std::vector<SourceProblem>& instances, const SolveOptions& opts) {
    SweepReport rep;
    rep.variant = v;
    for (const auto& inst : instances) {
        ++rep.checked;
        bool expected = source_oracle(v, inst);
        auto res = solve(reduce(v, inst), opts);
        if (res.verdict == Verdict::CapExceeded) {
            ++rep.cap_hits;
            rep.mismatches.push_back("cap exceeded: " + describe_source(inst));
            continue;
        }
        bool got = res.verdict == Verdict::Solvable;
        if (got != expected)
            rep.mismatches.push_back(std::string("oracle ") + (expected ? "true" : "false") + ", level " +
                                     std::string(to_string(res.verdict)) + ": " + describe_source(inst));
    }
    return rep;
}

SweepReport verify_sweep(Variant v, int max_vars, int max_clauses, const SolveOptions& opts) {
    std::vector<SourceProblem> instances;
    switch (v) {
        case Variant::ABPD:
            for (auto& f : enumerate_cnfs(max_vars, max_clauses)) instances.emplace_back(std::move(f));
            break;
        case Variant::ABED:
        case Variant::ABPS:
            for (auto& q : enumerate_qbfs(max_vars, max_clauses)) instances.emplace_back(std::move(q));
            break;
        case Variant::ABES:
            for (auto& s : enumerate_g2(max_vars, max_clauses)) instances.emplace_back(std::move(s));
            break;
    }
    return verify_instances(v, instances, opts);
}

}  // namespace hardbirds
