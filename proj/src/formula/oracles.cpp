#include "hardbirds/formula.hpp"

#include <algorithm>

namespace hardbirds {

namespace {

constexpr int kMaxBruteForceVars = 30;

Assignment from_mask(int num_vars, std::uint64_t mask) {
    Assignment a;
    for (int v = 1; v <= num_vars; ++v) a.set(v, (mask >> (v - 1)) & 1u);
    return a;
}

}  // namespace

bool tqbf_suffix(const QbfFormula& q, std::size_t from, Assignment outer) {
    if (from == q.prefix.size()) {
        // quantified-but-unused variables never reach the matrix; unquantified ones were rejected by validate
        return eval_cnf(q.matrix, outer);
    }
    const auto& qv = q.prefix[from];
    bool exists = qv.quantifier == Quantifier::Exists;
    for (bool value : {true, false}) {
        outer.set(qv.var, value);
        bool r = tqbf_suffix(q, from + 1, outer);
        if (exists && r) return true;
        if (!exists && !r) return false;
    }
    return !exists;
}

bool tqbf_oracle(const QbfFormula& q) {
    q.validate();
    return tqbf_suffix(q, 0, Assignment{});
}

std::optional<Assignment> sat_oracle(const CnfFormula& f) {
    f.validate();
    if (f.num_vars > kMaxBruteForceVars) throw InvalidArgument("too many variables for exhaustive search");
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << f.num_vars); ++m) {
        auto a = from_mask(f.num_vars, m);
        if (eval_cnf(f, a)) return a;
    }
    return std::nullopt;
}

std::vector<Assignment> sat_enumerate(const CnfFormula& f) {
    f.validate();
    if (f.num_vars > kMaxBruteForceVars) throw InvalidArgument("too many variables for exhaustive search");
    std::vector<Assignment> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << f.num_vars); ++m) {
        auto a = from_mask(f.num_vars, m);
        if (eval_cnf(f, a)) out.push_back(std::move(a));
    }
    return out;
}

// Positions are (mask, side to move). Index = mask * 2 + side, side 0 = player.
G2Game::G2Game(const G2Setup& setup) : setup_(setup) {
    setup_.validate();
    vars_ = setup_.variables();
    if (vars_.size() > 24) throw InvalidArgument("too many variables for exhaustive game search");
    for (std::size_t i = 0; i < vars_.size(); ++i)
        (setup_.ownership.at(vars_[i]) == Side::Player ? player_bits_ : opponent_bits_).push_back(i);

    const std::size_t masks = std::size_t{1} << vars_.size();
    player_true_.assign(masks, 0);
    opponent_true_.assign(masks, 0);
    for (std::size_t m = 0; m < masks; ++m) {
        Assignment a;
        for (std::size_t i = 0; i < vars_.size(); ++i) a.set(vars_[i], (m >> i) & 1u);
        player_true_[m] = eval_dnf(setup_.player_formula, a);
        opponent_true_[m] = eval_dnf(setup_.opponent_formula, a);
    }

    // Outcome of the move landing in mask m made by `mover`: +1 player wins, -1 opponent wins, 0 play on.
    auto landing = [&](std::size_t m, bool mover_is_player) -> int {
        if (mover_is_player) {
            if (player_true_[m]) return 1;
            if (opponent_true_[m]) return -1;
        } else {
            if (opponent_true_[m]) return -1;
            if (player_true_[m]) return 1;
        }
        return 0;
    };
    auto moves = [&](std::size_t m, bool player) {
        std::vector<std::size_t> out{m};
        for (std::size_t b : player ? player_bits_ : opponent_bits_) out.push_back(m ^ (std::size_t{1} << b));
        return out;
    };

    player_rank_.assign(masks, 0);
    opponent_rank_.assign(masks, 0);
    // Least fixpoint by rounds; a position's rank is the round in which it joined the attractor.
    for (unsigned round = 1;; ++round) {
        std::vector<std::size_t> add_player, add_opponent;
        for (std::size_t m = 0; m < masks; ++m) {
            if (!player_rank_[m]) {
                for (std::size_t n : moves(m, true)) {
                    int o = landing(n, true);
                    if (o == 1 || (o == 0 && opponent_rank_[n])) {
                        add_player.push_back(m);
                        break;
                    }
                }
            }
            if (!opponent_rank_[m]) {
                bool all = true;
                for (std::size_t n : moves(m, false)) {
                    int o = landing(n, false);
                    if (!(o == 1 || (o == 0 && player_rank_[n]))) {
                        all = false;
                        break;
                    }
                }
                if (all) add_opponent.push_back(m);
            }
        }
        if (add_player.empty() && add_opponent.empty()) break;
        for (auto m : add_player) player_rank_[m] = round;
        for (auto m : add_opponent) opponent_rank_[m] = round;
    }
}

std::size_t G2Game::index_of(const Assignment& a) const {
    std::size_t m = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (a.at(vars_[i])) m |= std::size_t{1} << i;
    return m;
}

bool G2Game::player_forces_win() const { return player_wins_from(setup_.initial_assignment()); }

bool G2Game::player_wins_from(const Assignment& a) const { return player_rank_[index_of(a)] != 0; }

std::optional<std::optional<Literal>> G2Game::winning_move(const Assignment& a) const {
    std::size_t m = index_of(a);
    if (!player_rank_[m]) return std::nullopt;
    std::optional<Literal> best;
    unsigned best_rank = ~0u;
    auto consider = [&](std::size_t n, std::optional<Literal> move) {
        unsigned r;
        if (player_true_[n]) r = 0;
        else if (opponent_true_[n] || !opponent_rank_[n]) return;
        else r = opponent_rank_[n];
        if (r < best_rank) {
            best_rank = r;
            best = move;
        }
    };
    consider(m, std::nullopt);
    for (std::size_t b : player_bits_) {
        std::size_t n = m ^ (std::size_t{1} << b);
        bool new_value = (n >> b) & 1u;
        consider(n, new_value ? Literal::pos(vars_[b]) : Literal::neg(vars_[b]));
    }
    return best;
}

bool g2_oracle(const G2Setup& s) { return G2Game(s).player_forces_win(); }

}  // namespace hardbirds
