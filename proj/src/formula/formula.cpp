#include "hardbirds/formula.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hardbirds {

ParseError::ParseError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

Literal Literal::from_dimacs(int lit) {
    if (lit == 0) throw InvalidArgument("literal 0 is not a variable");
    return lit > 0 ? pos(lit) : neg(-lit);
}

std::optional<bool> Assignment::get(Var v) const {
    auto it = values_.find(v);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

bool Assignment::at(Var v) const {
    auto it = values_.find(v);
    if (it == values_.end()) throw InvalidArgument("variable " + std::to_string(v) + " is unassigned");
    return it->second;
}

void CnfFormula::validate() const {
    if (num_vars < 0) throw InvalidArgument("negative variable count");
    for (const auto& c : clauses)
        for (const auto& l : c)
            if (l.var < 1 || l.var > num_vars)
                throw InvalidArgument("variable " + std::to_string(l.var) + " out of range 1.." +
                                      std::to_string(num_vars));
}

int QbfFormula::universal_count() const {
    return static_cast<int>(std::count_if(prefix.begin(), prefix.end(),
                                          [](const QuantifiedVar& q) { return q.quantifier == Quantifier::ForAll; }));
}

int QbfFormula::existential_count() const {
    return static_cast<int>(prefix.size()) - universal_count();
}

void QbfFormula::validate() const {
    matrix.validate();
    std::set<Var> seen;
    for (const auto& q : prefix) {
        if (q.var < 1 || q.var > matrix.num_vars)
            throw InvalidArgument("quantified variable " + std::to_string(q.var) + " out of range");
        if (!seen.insert(q.var).second)
            throw InvalidArgument("variable " + std::to_string(q.var) + " quantified twice");
    }
    for (const auto& c : matrix.clauses)
        for (const auto& l : c)
            if (!seen.count(l.var)) throw InvalidArgument("variable " + std::to_string(l.var) + " is free");
}

void DnfFormula::validate() const {
    for (const auto& t : terms) {
        if (t.empty()) throw InvalidArgument("empty term");
        if (t.size() > kMaxTermLength)
            throw InvalidArgument("term has " + std::to_string(t.size()) + " literals, at most 12 allowed");
        for (const auto& l : t)
            if (l.var < 1) throw InvalidArgument("variable ids start at 1");
    }
}

std::vector<Var> G2Setup::variables() const {
    std::vector<Var> out;
    for (const auto& [v, side] : ownership) out.push_back(v);
    return out;
}

std::vector<Var> G2Setup::owned_by(Side side) const {
    std::vector<Var> out;
    for (const auto& [v, s] : ownership)
        if (s == side) out.push_back(v);
    return out;
}

std::string G2Setup::name_of(Var v) const {
    auto it = names.find(v);
    return it != names.end() ? it->second : "x" + std::to_string(v);
}

Assignment G2Setup::initial_assignment() const {
    Assignment a;
    for (const auto& [v, b] : initial_values) a.set(v, b);
    return a;
}

void G2Setup::validate() const {
    player_formula.validate();
    opponent_formula.validate();
    std::set<Var> used;
    for (const auto* f : {&player_formula, &opponent_formula})
        for (const auto& t : f->terms)
            for (const auto& l : t) used.insert(l.var);
    for (Var v : used) {
        if (!ownership.count(v)) throw InvalidArgument(name_of(v) + " has no owner");
        if (!initial_values.count(v)) throw InvalidArgument(name_of(v) + " has no initial value");
    }
    for (const auto& [v, s] : ownership)
        if (!used.count(v)) throw InvalidArgument(name_of(v) + " is owned but appears in neither formula");
    for (const auto& [v, b] : initial_values)
        if (!used.count(v)) throw InvalidArgument(name_of(v) + " has an initial value but appears in neither formula");
}

bool eval_clause(const Clause3& c, const Assignment& a) {
    bool any = false;
    for (const auto& l : c) any = a.holds(l) || any;  // touch every literal so missing vars always throw
    return any;
}

bool eval_cnf(const CnfFormula& f, const Assignment& a) {
    bool all = true;
    for (const auto& c : f.clauses) all = eval_clause(c, a) && all;
    return all;
}

bool eval_dnf(const DnfFormula& f, const Assignment& a) {
    bool any = false;
    for (const auto& t : f.terms) {
        if (t.empty()) throw InvalidArgument("empty term");
        bool all = true;
        for (const auto& l : t) all = a.holds(l) && all;
        any = any || all;
    }
    return any;
}

std::string to_string(const Literal& l) {
    return (l.positive() ? "x" : "!x") + std::to_string(l.var);
}

std::string to_string(const CnfFormula& f) {
    if (f.clauses.empty()) return "true";
    std::string out;
    for (std::size_t i = 0; i < f.clauses.size(); ++i) {
        if (i) out += " & ";
        out += "(";
        for (std::size_t j = 0; j < 3; ++j) {
            if (j) out += " | ";
            out += to_string(f.clauses[i][j]);
        }
        out += ")";
    }
    return out;
}

std::string to_string(const QbfFormula& q) {
    std::string out;
    for (const auto& qv : q.prefix)
        out += (qv.quantifier == Quantifier::Exists ? "E" : "A") + std::string("x") + std::to_string(qv.var) + " ";
    return out + to_string(q.matrix);
}

std::string to_string(const DnfFormula& f, const std::map<Var, std::string>& names) {
    auto name = [&](Var v) {
        auto it = names.find(v);
        return it != names.end() ? it->second : "x" + std::to_string(v);
    };
    std::string out;
    for (std::size_t i = 0; i < f.terms.size(); ++i) {
        if (i) out += " | ";
        for (std::size_t j = 0; j < f.terms[i].size(); ++j) {
            if (j) out += " & ";
            const auto& l = f.terms[i][j];
            out += (l.positive() ? "" : "!") + name(l.var);
        }
    }
    return out;
}

std::string to_string(const G2Setup& s) { return to_g2_text(s); }

std::string to_dimacs(const CnfFormula& f) {
    std::ostringstream os;
    os << "p cnf " << f.num_vars << " " << f.clauses.size() << "\n";
    for (const auto& c : f.clauses) os << c[0].to_dimacs() << " " << c[1].to_dimacs() << " " << c[2].to_dimacs() << " 0\n";
    return os.str();
}

std::string to_qdimacs(const QbfFormula& q) {
    std::ostringstream os;
    os << "p cnf " << q.matrix.num_vars << " " << q.matrix.clauses.size() << "\n";
    std::size_t i = 0;
    while (i < q.prefix.size()) {
        auto kind = q.prefix[i].quantifier;
        os << (kind == Quantifier::Exists ? "e" : "a");
        for (; i < q.prefix.size() && q.prefix[i].quantifier == kind; ++i) os << " " << q.prefix[i].var;
        os << " 0\n";
    }
    for (const auto& c : q.matrix.clauses)
        os << c[0].to_dimacs() << " " << c[1].to_dimacs() << " " << c[2].to_dimacs() << " 0\n";
    return os.str();
}

std::string to_g2_text(const G2Setup& s) {
    std::ostringstream os;
    os << "player: " << to_string(s.player_formula, s.names) << "\n";
    os << "opponent: " << to_string(s.opponent_formula, s.names) << "\n";
    for (auto side : {Side::Player, Side::Opponent}) {
        os << "owns " << (side == Side::Player ? "player" : "opponent") << ":";
        for (Var v : s.owned_by(side)) os << " " << s.name_of(v);
        os << "\n";
    }
    os << "init:";
    for (const auto& [v, b] : s.initial_values) os << " " << s.name_of(v) << "=" << (b ? 1 : 0);
    os << "\n";
    return os.str();
}

}  // namespace hardbirds
