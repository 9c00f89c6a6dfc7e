#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hardbirds/engine.hpp"

namespace hardbirds {

// Exhaustive small-instance generators. Clauses are literal multisets and formulas are
// clause multisets, so instances differing only in clause or literal order appear once.
std::vector<CnfFormula> enumerate_cnfs(int max_vars, int max_clauses);
/// Prefix order is fixed to 1..V; every quantifier pattern is generated.
std::vector<QbfFormula> enumerate_qbfs(int max_vars, int max_clauses);
/// At most `max_per_side` variables per side and exactly `terms` terms per formula, each
/// term a nonempty set of distinct literals; every initial assignment.
std::vector<G2Setup> enumerate_g2(int max_per_side, int terms);

struct SweepReport {
    Variant variant = Variant::ABPD;
    std::size_t checked = 0;
    std::size_t cap_hits = 0;
    std::vector<std::string> mismatches;  // one line per disagreement or cap hit
    bool ok() const { return mismatches.empty() && cap_hits == 0; }
};

/// Reduces every instance, solves it with the variant's solver, and compares against the
/// brute-force oracle of the source problem.
SweepReport verify_instances(Variant v, const std::vector<SourceProblem>& instances, const SolveOptions& opts = {});
SweepReport verify_sweep(Variant v, int max_vars, int max_clauses, const SolveOptions& opts = {});

/// Oracle verdict for the source problem a variant is built from.
bool source_oracle(Variant v, const SourceProblem& p);
std::string describe_source(const SourceProblem& p);

}  // namespace hardbirds
