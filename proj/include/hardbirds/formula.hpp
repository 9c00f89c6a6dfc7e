#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hardbirds {

/// Raised for malformed input documents. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line = 0);
    int line() const { return line_; }

private:
    int line_;
};

/// Raised when a value violates a documented invariant (bad assignment, bad formula, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using Var = int;  // 1-based

enum class Polarity { Positive, Negative };

struct Literal {
    Var var = 1;
    Polarity polarity = Polarity::Positive;

    static Literal pos(Var v) { return {v, Polarity::Positive}; }
    static Literal neg(Var v) { return {v, Polarity::Negative}; }
    /// DIMACS-style signed integer: 3 -> x3, -3 -> !x3.
    static Literal from_dimacs(int lit);

    bool positive() const { return polarity == Polarity::Positive; }
    Literal negated() const { return {var, positive() ? Polarity::Negative : Polarity::Positive}; }
    /// True iff this literal holds when its variable takes `value`.
    bool holds(bool value) const { return positive() == value; }
    int to_dimacs() const { return positive() ? var : -var; }

    auto operator<=>(const Literal&) const = default;
};

/// A partial map from variables to truth values.
class Assignment {
public:
    Assignment() = default;

    void set(Var v, bool value) { values_[v] = value; }
    std::optional<bool> get(Var v) const;
    /// Throws InvalidArgument if `v` is unassigned.
    bool at(Var v) const;
    bool contains(Var v) const { return values_.count(v) != 0; }
    bool holds(const Literal& l) const { return l.holds(at(l.var)); }
    const std::map<Var, bool>& values() const { return values_; }

    bool operator==(const Assignment&) const = default;

private:
    std::map<Var, bool> values_;
};

using Clause3 = std::array<Literal, 3>;

struct CnfFormula {
    int num_vars = 0;
    std::vector<Clause3> clauses;

    /// Throws InvalidArgument on out-of-range variables.
    void validate() const;
};

enum class Quantifier { Exists, ForAll };

struct QuantifiedVar {
    Quantifier quantifier;
    Var var;
    bool operator==(const QuantifiedVar&) const = default;
};

struct QbfFormula {
    std::vector<QuantifiedVar> prefix;  // outermost first
    CnfFormula matrix;

    int universal_count() const;
    int existential_count() const;
    void validate() const;
};

struct DnfFormula {
    std::vector<std::vector<Literal>> terms;

    static constexpr std::size_t kMaxTermLength = 12;
    void validate() const;
};

enum class Side { Player, Opponent };

struct G2Setup {
    DnfFormula player_formula;
    DnfFormula opponent_formula;
    std::map<Var, Side> ownership;
    std::map<Var, bool> initial_values;
    std::map<Var, std::string> names;  // display names; may be empty

    std::vector<Var> variables() const;  // ascending
    std::vector<Var> owned_by(Side side) const;
    std::string name_of(Var v) const;
    Assignment initial_assignment() const;
    void validate() const;
};

// Parsing. All parsers throw ParseError with a line number on malformed input.
CnfFormula parse_cnf(std::string_view text);
QbfFormula parse_qbf(std::string_view text);
G2Setup parse_g2(std::string_view text);

// Rendering
std::string to_string(const Literal& l);
std::string to_string(const CnfFormula& f);
std::string to_string(const QbfFormula& q);
std::string to_string(const DnfFormula& f, const std::map<Var, std::string>& names = {});
std::string to_string(const G2Setup& s);
/// Inverse of parse_cnf / parse_qbf / parse_g2.
std::string to_dimacs(const CnfFormula& f);
std::string to_qdimacs(const QbfFormula& q);
std::string to_g2_text(const G2Setup& s);

// Evaluation. Throws InvalidArgument on missing variables or empty terms.
bool eval_clause(const Clause3& c, const Assignment& a);
bool eval_cnf(const CnfFormula& f, const Assignment& a);
bool eval_dnf(const DnfFormula& f, const Assignment& a);

// Brute-force oracles.
bool tqbf_oracle(const QbfFormula& q);
std::optional<Assignment> sat_oracle(const CnfFormula& f);
std::vector<Assignment> sat_enumerate(const CnfFormula& f);
bool g2_oracle(const G2Setup& s);

/// Truth of the quantified suffix of `q` starting at prefix position `from`, with
/// all earlier prefix variables fixed by `outer`.
bool tqbf_suffix(const QbfFormula& q, std::size_t from, Assignment outer);

/// Solved G2 game graph. A move is "make this literal true" on a variable the mover
/// owns; std::nullopt is a pass.
class G2Game {
public:
    explicit G2Game(const G2Setup& setup);

    bool player_forces_win() const;
    /// Whether the player, to move in position `a`, can force a win from there.
    bool player_wins_from(const Assignment& a) const;
    /// A move that keeps the player inside the winning region with the fewest rounds
    /// left; std::nullopt in the outer optional when `a` is not winning.
    std::optional<std::optional<Literal>> winning_move(const Assignment& a) const;

private:
    std::size_t index_of(const Assignment& a) const;

    G2Setup setup_;
    std::vector<Var> vars_;
    std::vector<std::size_t> player_bits_;
    std::vector<std::size_t> opponent_bits_;
    // rank 0 = not winning; otherwise number of fixpoint rounds needed
    std::vector<unsigned> player_rank_;
    std::vector<unsigned> opponent_rank_;
    std::vector<char> player_true_;
    std::vector<char> opponent_true_;
};

}  // namespace hardbirds
