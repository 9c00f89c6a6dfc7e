#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hardbirds/reducer.hpp"

namespace hardbirds {

struct SimState {
    GateState gates;
    BigInt birds_remaining;
    bool pig_alive = true;
    bool doomed = false;  // the pig can no longer be reached
    std::optional<OrderingPhase> ordering_phase;  // ABES only

    /// "<gate hex>/<birds>/<flags>"; the gate part has one hex digit per four gates.
    std::string serialize() const;
    bool operator==(const SimState&) const = default;
};

/// Circuit initial positions with the prelude birds fired through `prelude`.
SimState initial_sim_state(const ReductionOutput& r, Resolver& prelude);
/// One start state per prelude resolution sequence.
std::vector<SimState> initial_sim_states(const ReductionOutput& r);

struct ShotRecord {
    std::string target;
    BirdOutcome outcome;
    std::vector<RandomResolution> resolutions;
    std::vector<Setter> assigned;  // variable-setting exits the bird passed, in order
    std::size_t state_hash = 0;
};

struct FireResult {
    SimState state;
    ShotRecord record;
};

/// Throws InvalidArgument for an unknown target, an empty bird supply, or a dead pig.
FireResult fire(const ReductionOutput& r, const SimState& s, std::string_view target, Resolver& resolver);

enum class GameStatus { Win, Loss, Ongoing };
std::string_view to_string(GameStatus s);

struct Outcome {
    GameStatus status = GameStatus::Ongoing;
    BigInt shots_used;
};

Outcome status_of(const SimState& s, const BigInt& shots_used);

/// Fires the shots in order, stopping at a win, a doomed level, or when birds run out.
Outcome run_strategy(const ReductionOutput& r, const std::vector<std::string>& shots, Resolver& resolver,
                     std::vector<ShotRecord>* transcript = nullptr);

enum class Verdict { Solvable, Unsolvable, CapExceeded };
std::string_view to_string(Verdict v);

struct SolveOptions {
    std::size_t state_cap = 4'000'000;
    std::optional<std::chrono::milliseconds> time_limit;  // hitting either cap yields CapExceeded
    std::optional<BigInt> budget_override;
};

struct SolveResult {
    Verdict verdict = Verdict::Unsolvable;
    /// Fewest shots that force a win from every start state; empty when the pig is never forced.
    std::optional<BigInt> min_shots;
    std::vector<std::string> witness;  // deterministic variants, when solvable
    std::size_t states = 0;
};

/// Exists a shot sequence within the budget that kills the pig. ABPD and ABED.
SolveResult solve_deterministic(const ReductionOutput& r, const SolveOptions& opts = {});
/// The player wins within the budget against every Random-gate resolution, Stuck included. ABPS and ABES.
SolveResult solve_always(const ReductionOutput& r, const SolveOptions& opts = {});
/// Picks the solver matching the variant.
SolveResult solve(const ReductionOutput& r, const SolveOptions& opts = {});

// Scripted play.

struct PlayContext {
    SimState state;
    Assignment values;  // current truth values as seen through the modify chains
    std::vector<Assignment> checks;  // universal values each time the first clause gadget was checked
    std::string last_shot;
};

/// Next shot target, or std::nullopt to stop.
using Policy = std::function<std::optional<std::string>(const PlayContext&)>;

/// Value for an existential variable given the values of every variable quantified before it.
using ExistentialPolicy = std::function<bool(Var, const Assignment& outer)>;
/// A G2 move for the player: the literal to make true, or std::nullopt to pass.
using MovePolicy = std::function<std::optional<Literal>(const Assignment& current)>;

/// Walks the quantifier framework top-down, repeating framework cycles through the UQF
/// column (ABPD, ABED, ABPS).
Policy framework_policy(const ReductionOutput& r, ExistentialPolicy choose);
/// Oracle-backed existential choices (keeps the quantified suffix true whenever possible).
ExistentialPolicy tqbf_policy(const QbfFormula& q);
/// Fixed values for every existential variable.
ExistentialPolicy fixed_policy(const Assignment& values);

/// Ordering-conformant G2 play: own move, self-check, opponent move, opponent check (ABES).
Policy g2_policy(const ReductionOutput& r, MovePolicy move);
MovePolicy g2_oracle_policy(const G2Setup& s);

PlayContext initial_context(const ReductionOutput& r, const SimState& start);

struct PlayResult {
    Outcome outcome;
    std::vector<ShotRecord> transcript;
    PlayContext final;
};

PlayResult play(const ReductionOutput& r, const Policy& policy, Resolver& resolver);

struct AllResolutionsResult {
    bool all_win = true;
    std::size_t leaves = 0;  // distinct terminal positions; equal positions reached twice count once
    BigInt max_shots;
    std::vector<ShotRecord> losing_transcript;  // first losing branch, if any
};

/// Runs the policy against every resolution of every Random gate it meets, prelude included.
/// Branches stop at a win, a loss, or after `max_shots` shots. Positions reached along several
/// resolution paths are evaluated once.
AllResolutionsResult play_all_resolutions(const ReductionOutput& r, const Policy& policy, std::size_t max_shots,
                                          std::size_t leaf_cap = 1'000'000);

/// The deterministic shot list the policy produces (ABPD/ABED).
std::vector<std::string> script_strategy(const ReductionOutput& r, const Policy& policy);

// Strategy files and transcripts.
std::vector<std::string> parse_strategy(std::string_view text);
std::string format_strategy(const std::vector<std::string>& shots);
std::string format_transcript(const std::vector<ShotRecord>& transcript);
std::string transcript_to_json(const std::vector<ShotRecord>& transcript, const Outcome& outcome);

}  // namespace hardbirds
