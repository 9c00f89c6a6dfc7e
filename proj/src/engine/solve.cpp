#include <deque>
#include <unordered_map>

#include "engine_internal.hpp"
#include "hardbirds/engine.hpp"

namespace hardbirds {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Solvable: return "solvable";
        case Verdict::Unsolvable: return "unsolvable";
        case Verdict::CapExceeded: return "cap exceeded";
    }
    return "?";
}

namespace {

struct StateHash {
    std::size_t operator()(const GateState& s) const { return s.hash(); }
};

constexpr std::uint32_t kWin = 0xffffffffu;
constexpr std::uint32_t kUnranked = 0xffffffffu;

// The reachable game graph over gate configurations. Bird counts stay out of the key:
// the backward rank of a state is the fewest shots that force the pig from it, so a
// state is winnable with b birds iff its rank is at most b.
class GameGraph {
public:
    GameGraph(const ReductionOutput& r, bool adversarial, const SolveOptions& opts)
        : r_(r), adversarial_(adversarial), cap_(opts.state_cap) {
        if (opts.time_limit) deadline_ = std::chrono::steady_clock::now() + *opts.time_limit;
        for (const auto& [name, port] : r.circuit.entrances()) shots_.push_back({name, port});
    }

    bool build(const std::vector<GateState>& starts) {
        for (const auto& s : starts) starts_.push_back(intern(s));
        for (std::size_t i = 0; i < states_.size(); ++i) {
            if (states_.size() > cap_) return false;
            if (deadline_ && i % 256 == 0 && std::chrono::steady_clock::now() > *deadline_) return false;
            expand(static_cast<std::uint32_t>(i));
        }
        return states_.size() <= cap_;
    }

    void rank() {
        const std::size_t n = states_.size();
        rank_.assign(n, kUnranked);
        best_.assign(n, 0);
        std::vector<std::uint32_t> pending(edge_owner_.size());
        std::vector<std::vector<std::uint32_t>> preds(n + 1);  // node n stands for the win
        for (std::uint32_t e = 0; e < edge_owner_.size(); ++e) {
            pending[e] = static_cast<std::uint32_t>(edge_end_[e] - edge_begin_[e]);
            for (auto k = edge_begin_[e]; k < edge_end_[e]; ++k) {
                auto t = targets_[k];
                preds[t == kWin ? n : t].push_back(e);
            }
        }
        std::deque<std::pair<std::uint32_t, std::uint32_t>> queue{{static_cast<std::uint32_t>(n), 0}};
        while (!queue.empty()) {
            auto [node, rk] = queue.front();
            queue.pop_front();
            for (auto e : preds[node]) {
                if (--pending[e] != 0) continue;
                auto src = edge_owner_[e];
                if (rank_[src] != kUnranked) continue;
                rank_[src] = rk + 1;
                best_[src] = e;
                queue.push_back({src, rk + 1});
            }
        }
    }

    std::optional<std::uint32_t> start_rank() const {
        std::uint32_t worst = 0;
        for (auto s : starts_) {
            if (rank_[s] == kUnranked) return std::nullopt;
            worst = std::max(worst, rank_[s]);
        }
        return worst;
    }

    std::vector<std::string> witness() const {
        std::vector<std::string> out;
        if (starts_.size() != 1) return out;
        std::uint32_t s = starts_.front();
        while (s != kWin && rank_[s] != kUnranked) {
            auto e = best_[s];
            out.push_back(shots_[edge_shot_[e]].first);
            auto t = targets_[edge_begin_[e]];
            s = t;
        }
        return out;
    }

    std::size_t size() const { return states_.size(); }

private:
    std::uint32_t intern(const GateState& s) {
        auto [it, fresh] = index_.try_emplace(s, static_cast<std::uint32_t>(states_.size()));
        if (fresh) states_.push_back(s);
        return it->second;
    }

    void expand(std::uint32_t id) {
        const GateState cur = states_[id];
        if (r_.pig_guard && !cur.open(*r_.pig_guard)) return;  // doomed: no edges, never ranked
        std::vector<std::uint32_t> succ;
        for (std::uint32_t k = 0; k < shots_.size(); ++k) {
            succ.clear();
            if (adversarial_) {
                for (const auto& f : enumerate_flights(r_.circuit, cur, shots_[k].second))
                    succ.push_back(f.outcome.kind == OutcomeKind::PigKilled ? kWin : intern(f.state));
            } else {
                GateState next = cur;
                NoRandomResolver none;
                auto kind = propagate_in_place(r_.circuit, next, shots_[k].second, none);
                succ.push_back(kind == OutcomeKind::PigKilled ? kWin : intern(next));
            }
            std::sort(succ.begin(), succ.end());
            succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
            // a shot that can leave the state unchanged never helps the player
            if (std::find(succ.begin(), succ.end(), id) != succ.end()) continue;
            edge_owner_.push_back(id);
            edge_shot_.push_back(k);
            edge_begin_.push_back(targets_.size());
            targets_.insert(targets_.end(), succ.begin(), succ.end());
            edge_end_.push_back(targets_.size());
        }
    }

    const ReductionOutput& r_;
    bool adversarial_;
    std::size_t cap_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::vector<std::pair<std::string, Port>> shots_;
    std::vector<GateState> states_;
    std::unordered_map<GateState, std::uint32_t, StateHash> index_;
    std::vector<std::uint32_t> starts_;
    std::vector<std::uint32_t> edge_owner_, edge_shot_;
    std::vector<std::size_t> edge_begin_, edge_end_;
    std::vector<std::uint32_t> targets_;
    std::vector<std::uint32_t> rank_, best_;
};

SolveResult run_solver(const ReductionOutput& r, const SolveOptions& opts, bool adversarial) {
    SolveResult out;
    const BigInt budget = opts.budget_override.value_or(r.bird_budget);
    std::vector<GateState> starts;
    for (const auto& s : initial_sim_states(r)) {
        if (!s.pig_alive) {
            out.min_shots = 0;
        } else {
            starts.push_back(s.gates);
        }
    }
    GameGraph g(r, adversarial, opts);
    bool complete = g.build(starts);
    out.states = g.size();
    if (!complete) {
        out.verdict = Verdict::CapExceeded;
        return out;
    }
    g.rank();
    auto rk = g.start_rank();
    if (!rk) {
        out.verdict = Verdict::Unsolvable;
        return out;
    }
    out.min_shots = *rk;
    out.verdict = BigInt(*rk) <= budget ? Verdict::Solvable : Verdict::Unsolvable;
    if (!adversarial && out.verdict == Verdict::Solvable) out.witness = g.witness();
    return out;
}

}  // namespace

SolveResult solve_deterministic(const ReductionOutput& r, const SolveOptions& opts) {
    if (is_stochastic(r.variant)) throw InvalidArgument("solve_deterministic needs an ABPD or ABED reduction");
    return run_solver(r, opts, false);
}

SolveResult solve_always(const ReductionOutput& r, const SolveOptions& opts) {
    if (!is_stochastic(r.variant)) throw InvalidArgument("solve_always needs an ABPS or ABES reduction");
    return run_solver(r, opts, true);
}

SolveResult solve(const ReductionOutput& r, const SolveOptions& opts) {
    return is_stochastic(r.variant) ? solve_always(r, opts) : solve_deterministic(r, opts);
}

}  // namespace hardbirds
