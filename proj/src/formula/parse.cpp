#include "hardbirds/formula.hpp"

#include <cctype>
#include <charconv>
#include <set>

namespace hardbirds {

namespace {

struct Line {
    int number;
    std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> out;
    int n = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.push_back({++n, line});
        start = end + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

long parse_int(std::string_view w, int line) {
    long v = 0;
    auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || p != w.data() + w.size()) throw ParseError("expected an integer, got '" + std::string(w) + "'", line);
    return v;
}

struct Header {
    int num_vars = 0;
    int num_clauses = 0;
    std::size_t next_line = 0;
};

Header read_header(const std::vector<Line>& lines) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto t = trim(lines[i].text);
        if (t.empty() || t[0] == 'c') continue;
        auto w = words(t);
        if (w.size() != 4 || w[0] != "p" || w[1] != "cnf") throw ParseError("expected 'p cnf <vars> <clauses>' header", lines[i].number);
        long v = parse_int(w[2], lines[i].number), c = parse_int(w[3], lines[i].number);
        if (v < 0 || c < 0) throw ParseError("negative count in header", lines[i].number);
        return {static_cast<int>(v), static_cast<int>(c), i + 1};
    }
    throw ParseError("missing 'p cnf' header");
}

// Reads 0-terminated clauses from lines[from..). Clauses may span lines.
CnfFormula read_clauses(const std::vector<Line>& lines, std::size_t from, const Header& h) {
    CnfFormula f;
    f.num_vars = h.num_vars;
    std::vector<Literal> cur;
    int cur_line = 0;
    for (std::size_t i = from; i < lines.size(); ++i) {
        auto t = trim(lines[i].text);
        if (t.empty() || t[0] == 'c') continue;
        if (t[0] == '%') break;
        int ln = lines[i].number;
        for (auto w : words(t)) {
            long v = parse_int(w, ln);
            if (v == 0) {
                if (cur.empty()) throw ParseError("empty clause", ln);
                Clause3 c{cur[0], cur[0], cur[0]};
                for (std::size_t k = 0; k < 3; ++k) c[k] = cur[std::min(k, cur.size() - 1)];
                f.clauses.push_back(c);
                cur.clear();
                continue;
            }
            if (v > h.num_vars || -v > h.num_vars)
                throw ParseError("variable " + std::to_string(v < 0 ? -v : v) + " out of range 1.." + std::to_string(h.num_vars), ln);
            if (cur.size() == 3) throw ParseError("clause has more than 3 literals", ln);
            if (cur.empty()) cur_line = ln;
            cur.push_back(Literal::from_dimacs(static_cast<int>(v)));
        }
    }
    if (!cur.empty()) throw ParseError("clause not terminated by 0", cur_line);
    if (static_cast<int>(f.clauses.size()) != h.num_clauses)
        throw ParseError("header declares " + std::to_string(h.num_clauses) + " clauses, found " + std::to_string(f.clauses.size()));
    return f;
}

}  // namespace

CnfFormula parse_cnf(std::string_view text) {
    auto lines = split_lines(text);
    auto h = read_header(lines);
    return read_clauses(lines, h.next_line, h);
}

QbfFormula parse_qbf(std::string_view text) {
    auto lines = split_lines(text);
    auto h = read_header(lines);
    QbfFormula q;
    std::set<Var> quantified;
    std::size_t i = h.next_line;
    for (; i < lines.size(); ++i) {
        auto t = trim(lines[i].text);
        if (t.empty() || t[0] == 'c') continue;
        if (t[0] != 'e' && t[0] != 'a') break;
        int ln = lines[i].number;
        auto w = words(t);
        if (w[0] != "e" && w[0] != "a") throw ParseError("unknown quantifier '" + std::string(w[0]) + "'", ln);
        if (w.size() < 2 || w.back() != "0") throw ParseError("quantifier line must end with 0", ln);
        auto kind = w[0] == "e" ? Quantifier::Exists : Quantifier::ForAll;
        for (std::size_t k = 1; k + 1 < w.size(); ++k) {
            long v = parse_int(w[k], ln);
            if (v < 1 || v > h.num_vars) throw ParseError("quantified variable " + std::string(w[k]) + " out of range", ln);
            if (!quantified.insert(static_cast<Var>(v)).second)
                throw ParseError("variable " + std::to_string(v) + " quantified twice", ln);
            q.prefix.push_back({kind, static_cast<Var>(v)});
        }
    }
    q.matrix = read_clauses(lines, i, h);
    for (const auto& c : q.matrix.clauses)
        for (const auto& l : c)
            if (!quantified.count(l.var)) throw ParseError("variable " + std::to_string(l.var) + " is not quantified");
    return q;
}

namespace {

class G2Reader {
public:
    G2Setup setup;

    Var intern(std::string_view name, int ln) {
        if (name.empty()) throw ParseError("missing variable name", ln);
        for (char ch : name)
            if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
                throw ParseError("bad variable name '" + std::string(name) + "'", ln);
        std::string n(name);
        auto it = ids_.find(n);
        if (it != ids_.end()) return it->second;
        Var v = static_cast<Var>(ids_.size()) + 1;
        ids_[n] = v;
        setup.names[v] = n;
        return v;
    }

    std::optional<Var> lookup(std::string_view name) const {
        auto it = ids_.find(std::string(name));
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    DnfFormula parse_dnf(std::string_view s, int ln) {
        DnfFormula f;
        std::size_t start = 0;
        while (true) {
            std::size_t bar = s.find('|', start);
            auto term_text = trim(s.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start));
            if (!term_text.empty() && term_text.front() == '(') {
                if (term_text.back() != ')') throw ParseError("unbalanced parenthesis", ln);
                term_text = trim(term_text.substr(1, term_text.size() - 2));
            }
            if (term_text.empty()) throw ParseError("empty term", ln);
            std::vector<Literal> term;
            std::size_t ts = 0;
            while (true) {
                std::size_t amp = term_text.find('&', ts);
                auto lit = trim(term_text.substr(ts, amp == std::string_view::npos ? std::string_view::npos : amp - ts));
                bool neg = false;
                while (!lit.empty() && (lit.front() == '!' || lit.front() == '~')) {
                    neg = !neg;
                    lit = trim(lit.substr(1));
                }
                Var v = intern(lit, ln);
                term.push_back(neg ? Literal::neg(v) : Literal::pos(v));
                if (amp == std::string_view::npos) break;
                ts = amp + 1;
            }
            if (term.size() > DnfFormula::kMaxTermLength)
                throw ParseError("term has " + std::to_string(term.size()) + " literals, at most 12 allowed", ln);
            f.terms.push_back(std::move(term));
            if (bar == std::string_view::npos) break;
            start = bar + 1;
        }
        return f;
    }

private:
    std::map<std::string, Var> ids_;
};

}  // namespace

G2Setup parse_g2(std::string_view text) {
    G2Reader r;
    bool have_player = false, have_opponent = false, have_init = false;
    std::vector<std::pair<Line, Side>> owns;
    std::vector<Line> inits;
    for (const auto& line : split_lines(text)) {
        auto t = line.text;
        if (auto hash = t.find('#'); hash != std::string_view::npos) t = t.substr(0, hash);
        t = trim(t);
        if (t.empty()) continue;
        auto colon = t.find(':');
        if (colon == std::string_view::npos) throw ParseError("expected '<section>: ...'", line.number);
        auto key = trim(t.substr(0, colon));
        auto body = trim(t.substr(colon + 1));
        if (key == "player" || key == "opponent") {
            bool& have = key == "player" ? have_player : have_opponent;
            if (have) throw ParseError("duplicate '" + std::string(key) + "' formula", line.number);
            have = true;
            auto f = r.parse_dnf(body, line.number);
            (key == "player" ? r.setup.player_formula : r.setup.opponent_formula) = std::move(f);
        } else if (key == "owns player" || key == "owns opponent") {
            owns.push_back({{line.number, body}, key == "owns player" ? Side::Player : Side::Opponent});
        } else if (key == "init") {
            have_init = true;
            inits.push_back({line.number, body});
        } else {
            throw ParseError("unknown section '" + std::string(key) + "'", line.number);
        }
    }
    if (!have_player) throw ParseError("missing 'player:' formula");
    if (!have_opponent) throw ParseError("missing 'opponent:' formula");
    if (!have_init) throw ParseError("missing 'init:' line");

    for (const auto& [line, side] : owns) {
        for (auto w : words(line.text)) {
            auto v = r.lookup(w);
            if (!v) throw ParseError("owned variable '" + std::string(w) + "' appears in neither formula", line.number);
            auto [it, fresh] = r.setup.ownership.emplace(*v, side);
            if (!fresh) {
                if (it->second != side) throw ParseError("variable '" + std::string(w) + "' owned by both players", line.number);
                throw ParseError("variable '" + std::string(w) + "' listed twice", line.number);
            }
        }
    }
    for (const auto& line : inits) {
        for (auto w : words(line.text)) {
            auto eq = w.find('=');
            if (eq == std::string_view::npos) throw ParseError("expected name=0 or name=1", line.number);
            auto name = w.substr(0, eq), val = w.substr(eq + 1);
            auto v = r.lookup(name);
            if (!v) throw ParseError("initial value for unknown variable '" + std::string(name) + "'", line.number);
            if (val != "0" && val != "1") throw ParseError("initial value must be 0 or 1", line.number);
            if (!r.setup.initial_values.emplace(*v, val == "1").second)
                throw ParseError("duplicate initial value for '" + std::string(name) + "'", line.number);
        }
    }
    for (const auto& [v, name] : r.setup.names) {
        if (!r.setup.ownership.count(v)) throw ParseError("variable '" + name + "' is owned by neither player");
        if (!r.setup.initial_values.count(v)) throw ParseError("missing initial value for '" + name + "'");
    }
    return std::move(r.setup);
}

}  // namespace hardbirds
