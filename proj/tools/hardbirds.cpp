#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "hardbirds/verify.hpp"

using namespace hardbirds;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFalse = 1, kUsage = 2, kCap = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string input;
    std::string variant;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> max_birds;
    std::size_t state_cap = SolveOptions{}.state_cap;
    std::optional<double> time_limit;
    std::string format = "text";
    std::string out;
    // play
    std::string strategy;
    std::string assign;
    bool all_resolutions = false;
    // verify
    std::optional<int> max_vars, max_clauses;
    std::vector<std::string> include;
    // export
    std::string what = "circuit";
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void emit(const Config& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(cfg.out);
    if (!out) throw UsageError("cannot write " + cfg.out);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

Variant need_variant(const Config& cfg) {
    if (cfg.variant.empty()) throw UsageError("--variant is required");
    auto v = variant_from(cfg.variant);
    if (!v) throw UsageError("unknown variant '" + cfg.variant + "' (abpd, abed, abps, abes)");
    return *v;
}

enum class SourceKind { Cnf, Qbf, G2 };

SourceKind sniff(const std::string& path, const std::string& text) {
    auto ends = [&](std::string_view ext) { return path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0; };
    if (ends(".g2")) return SourceKind::G2;
    if (ends(".qdimacs")) return SourceKind::Qbf;
    if (ends(".cnf")) return SourceKind::Cnf;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("player:", 0) == 0 || line.rfind("owns", 0) == 0) return SourceKind::G2;
        if (line.rfind("a ", 0) == 0 || line.rfind("e ", 0) == 0) return SourceKind::Qbf;
    }
    return SourceKind::Cnf;
}

SourceProblem parse_source(SourceKind k, const std::string& text) {
    switch (k) {
        case SourceKind::Cnf: return parse_cnf(text);
        case SourceKind::Qbf: return parse_qbf(text);
        case SourceKind::G2: return parse_g2(text);
    }
    throw UsageError("unreachable");
}

SourceProblem load_for(Variant v, const std::string& path) {
    if (path.empty()) throw UsageError("an input file is required");
    auto text = read_file(path);
    switch (v) {
        case Variant::ABPD: return sniff(path, text) == SourceKind::Qbf ? SourceProblem{parse_qbf(text)} : SourceProblem{parse_cnf(text)};
        case Variant::ABED:
        case Variant::ABPS: return parse_qbf(text);
        case Variant::ABES: return parse_g2(text);
    }
    throw UsageError("unreachable");
}

void check_format(const Config& cfg, std::initializer_list<std::string_view> allowed) {
    for (auto a : allowed)
        if (cfg.format == a) return;
    throw UsageError("--format " + cfg.format + " is not available here");
}

SolveOptions solve_options(const Config& cfg) {
    SolveOptions o;
    o.state_cap = cfg.state_cap;
    if (cfg.time_limit) o.time_limit = std::chrono::milliseconds(static_cast<long long>(*cfg.time_limit * 1000));
    if (cfg.max_birds) {
        try {
            o.budget_override = BigInt(*cfg.max_birds);
        } catch (const std::exception&) {
            throw UsageError("--max-birds-override must be a nonnegative integer");
        }
        if (*o.budget_override < 0) throw UsageError("--max-birds-override must be a nonnegative integer");
    }
    return o;
}

int cmd_reduce(const Config& cfg) {
    check_format(cfg, {"text", "structured", "dot"});
    auto v = need_variant(cfg);
    auto r = reduce(v, load_for(v, cfg.input));
    if (cfg.format == "structured") return emit(cfg, reduction_to_json(r)), kOk;
    if (cfg.format == "dot") return emit(cfg, circuit_to_dot(r.circuit, to_string(v))), kOk;
    std::ostringstream os;
    os << "variant: " << to_string(v) << "\n"
       << "bird budget: " << r.bird_budget << "\n"
       << "gates: " << r.circuit.gate_count() << "\n"
       << "tunnels: " << r.tunnel_count() << "\n"
       << "gadgets:";
    for (const auto& [kind, n] : r.inventory()) os << " " << n << " " << to_string(kind);
    os << "\nprelude:";
    for (const auto& p : r.prelude) os << " " << to_string(p, r.circuit);
    os << "\nentrances:\n";
    for (const auto& e : r.manifest()) os << "  " << e << "\n";
    emit(cfg, os.str());
    return kOk;
}

int cmd_solve(const Config& cfg) {
    check_format(cfg, {"text", "structured"});
    auto v = need_variant(cfg);
    auto r = reduce(v, load_for(v, cfg.input));
    auto opts = solve_options(cfg);
    auto res = solve(r, opts);
    const BigInt budget = opts.budget_override.value_or(r.bird_budget);
    if (cfg.format == "structured") {
        json j;
        j["variant"] = std::string(to_string(v));
        j["verdict"] = std::string(to_string(res.verdict));
        j["bird_budget"] = budget.str();
        j["min_shots"] = res.min_shots ? json(res.min_shots->str()) : json(nullptr);
        j["states"] = res.states;
        j["witness"] = res.witness;
        emit(cfg, j.dump(2));
    } else {
        std::ostringstream os;
        os << "verdict: " << to_string(res.verdict) << "\n"
           << "bird budget: " << budget << "\n"
           << "min shots: " << (res.min_shots ? res.min_shots->str() : "-") << "\n"
           << "states: " << res.states << "\n";
        if (!res.witness.empty()) {
            os << "witness (" << res.witness.size() << " shots):\n";
            for (const auto& s : res.witness) os << "  " << s << "\n";
        }
        emit(cfg, os.str());
    }
    switch (res.verdict) {
        case Verdict::Solvable: return kOk;
        case Verdict::Unsolvable: return kFalse;
        case Verdict::CapExceeded: return kCap;
    }
    return kFalse;
}

Assignment parse_assignment(const std::string& text) {
    Assignment a;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("--assign expects var=0|1 pairs, e.g. 1=1,2=0");
        try {
            a.set(static_cast<Var>(std::stoul(item.substr(0, eq))), std::stoi(item.substr(eq + 1)) != 0);
        } catch (const std::logic_error&) {
            throw UsageError("--assign expects var=0|1 pairs, e.g. 1=1,2=0");
        }
    }
    return a;
}

// A satisfying assignment, or all-false when there is none (the level is then lost anyway).
Assignment sat_or_false(const CnfFormula& f) {
    if (auto a = sat_oracle(f)) return *a;
    Assignment a;
    for (Var v = 1; v <= static_cast<Var>(f.num_vars); ++v) a.set(v, false);
    return a;
}

Policy builtin_policy(const Config& cfg, const ReductionOutput& r) {
    if (r.variant == Variant::ABES) return g2_policy(r, g2_oracle_policy(std::get<G2Setup>(r.source)));
    if (!cfg.assign.empty()) return framework_policy(r, fixed_policy(parse_assignment(cfg.assign)));
    if (const auto* q = std::get_if<QbfFormula>(&r.source)) {
        if (r.variant != Variant::ABPD) return framework_policy(r, tqbf_policy(*q));
        return framework_policy(r, fixed_policy(sat_or_false(q->matrix)));
    }
    return framework_policy(r, fixed_policy(sat_or_false(std::get<CnfFormula>(r.source))));
}

int cmd_play(const Config& cfg) {
    check_format(cfg, {"text", "structured"});
    auto v = need_variant(cfg);
    auto r = reduce(v, load_for(v, cfg.input));
    if (auto o = solve_options(cfg); o.budget_override) r.bird_budget = *o.budget_override;

    if (cfg.all_resolutions) {
        if (!cfg.strategy.empty()) throw UsageError("--all-resolutions runs the built-in policy only");
        const std::size_t horizon = r.bird_budget > 100000 ? 100000 : static_cast<std::size_t>(r.bird_budget);
        auto all = play_all_resolutions(r, builtin_policy(cfg, r), horizon);
        std::ostringstream os;
        if (cfg.format == "structured") {
            json j{{"all_win", all.all_win}, {"leaves", all.leaves}, {"max_shots", all.max_shots.str()}};
            if (!all.all_win) j["losing"] = json::parse(transcript_to_json(all.losing_transcript, {GameStatus::Loss, all.losing_transcript.size()}));
            os << j.dump(2);
        } else {
            os << (all.all_win ? "wins against every resolution" : "loses against some resolution") << "\n"
               << "branches: " << all.leaves << "\nmax shots: " << all.max_shots << "\n";
            if (!all.all_win) os << "losing branch:\n" << format_transcript(all.losing_transcript);
        }
        emit(cfg, os.str());
        return all.all_win ? kOk : kFalse;
    }

    std::unique_ptr<Resolver> resolver;
    if (is_stochastic(v)) resolver = std::make_unique<SeededResolver>(cfg.seed.value_or(0));
    else resolver = std::make_unique<NoRandomResolver>();

    Outcome outcome;
    std::vector<ShotRecord> transcript;
    if (!cfg.strategy.empty()) {
        auto shots = parse_strategy(read_file(cfg.strategy));
        try {
            outcome = run_strategy(r, shots, *resolver, &transcript);
        } catch (const InvalidArgument& e) {
            throw UsageError(std::string("strategy: ") + e.what());
        }
    } else {
        auto p = play(r, builtin_policy(cfg, r), *resolver);
        outcome = p.outcome;
        transcript = std::move(p.transcript);
    }
    if (cfg.format == "structured") emit(cfg, transcript_to_json(transcript, outcome));
    else emit(cfg, format_transcript(transcript) + "result: " + std::string(to_string(outcome.status)) + " after " + outcome.shots_used.str() + " shots\n");
    return outcome.status == GameStatus::Win ? kOk : kFalse;
}

int cmd_oracle(const Config& cfg) {
    check_format(cfg, {"text", "structured"});
    if (cfg.input.empty()) throw UsageError("an input file is required");
    auto text = read_file(cfg.input);
    auto kind = sniff(cfg.input, text);
    if (!cfg.variant.empty()) {
        auto v = need_variant(cfg);
        kind = v == Variant::ABES ? SourceKind::G2 : v == Variant::ABPD ? kind : SourceKind::Qbf;
    }
    auto src = parse_source(kind, text);
    bool verdict = false;
    std::string line;
    json j;
    switch (kind) {
        case SourceKind::Cnf: {
            auto a = sat_oracle(std::get<CnfFormula>(src));
            verdict = a.has_value();
            line = verdict ? "satisfiable:" : "unsatisfiable";
            j["problem"] = "3-SAT";
            if (a) {
                for (const auto& [var, val] : a->values()) {
                    line += " x" + std::to_string(var) + "=" + (val ? "1" : "0");
                    j["assignment"][std::to_string(var)] = val;
                }
            }
            break;
        }
        case SourceKind::Qbf:
            verdict = tqbf_oracle(std::get<QbfFormula>(src));
            line = verdict ? "true" : "false";
            j["problem"] = "TQBF";
            break;
        case SourceKind::G2:
            verdict = g2_oracle(std::get<G2Setup>(src));
            line = verdict ? "player 1 forces victory" : "player 1 cannot force victory";
            j["problem"] = "G2";
            break;
    }
    j["verdict"] = verdict;
    emit(cfg, cfg.format == "structured" ? j.dump(2) : line);
    return verdict ? kOk : kFalse;
}

int cmd_verify(const Config& cfg) {
    check_format(cfg, {"text", "structured"});
    auto v = need_variant(cfg);
    const bool g2 = v == Variant::ABES;
    const int vars = cfg.max_vars.value_or(g2 ? 1 : 3);
    const int clauses = cfg.max_clauses.value_or(g2 ? 1 : v == Variant::ABPD ? 3 : 2);
    if (vars < 1 || clauses < (g2 ? 1 : 0)) throw UsageError("size bounds out of range");

    std::vector<SourceProblem> instances;
    switch (v) {
        case Variant::ABPD:
            for (auto& f : enumerate_cnfs(vars, clauses)) instances.emplace_back(std::move(f));
            break;
        case Variant::ABED:
        case Variant::ABPS:
            for (auto& q : enumerate_qbfs(vars, clauses)) instances.emplace_back(std::move(q));
            break;
        case Variant::ABES:
            for (auto& s : enumerate_g2(vars, clauses)) instances.emplace_back(std::move(s));
            break;
    }
    for (const auto& path : cfg.include) instances.push_back(load_for(v, path));

    auto rep = verify_instances(v, instances, solve_options(cfg));
    const std::size_t mismatches = rep.mismatches.size() - rep.cap_hits;
    if (cfg.format == "structured") {
        json j{{"variant", std::string(to_string(v))}, {"checked", rep.checked}, {"mismatches", mismatches},
               {"cap_hits", rep.cap_hits}, {"details", rep.mismatches}};
        emit(cfg, j.dump(2));
    } else {
        std::ostringstream os;
        os << rep.checked << " instances checked, " << mismatches << " mismatches";
        if (rep.cap_hits) os << ", " << rep.cap_hits << " cap hits";
        os << "\n";
        for (const auto& m : rep.mismatches) os << "  " << m << "\n";
        emit(cfg, os.str());
    }
    if (mismatches) return kFalse;
    return rep.cap_hits ? kCap : kOk;
}

int cmd_export(const Config& cfg) {
    auto v = need_variant(cfg);
    auto r = reduce(v, load_for(v, cfg.input));
    if (cfg.what == "circuit") {
        check_format(cfg, {"dot", "structured"});
        emit(cfg, cfg.format == "dot" ? circuit_to_dot(r.circuit, to_string(v)) : circuit_to_json(r.circuit));
    } else if (cfg.what == "level") {
        check_format(cfg, {"structured"});
        emit(cfg, level_to_json(annotate_geometry(r, PhysicsParams{}), r));
    } else if (cfg.what == "transitions") {
        check_format(cfg, {"text"});
        std::set<GadgetKind> done;
        std::string out;
        for (const auto& g : r.gadgets) {
            if (!done.insert(g.blueprint.kind).second) continue;
            out += "== " + std::string(to_string(g.blueprint.kind)) + " (" + g.name + ")\n";
            out += format_behavior_table(enumerate_gadget_behavior(g.blueprint)) + "\n";
        }
        emit(cfg, out);
    } else {
        throw UsageError("--what must be circuit, level or transitions");
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Angry Birds hardness circuits: reduce, simulate, solve and verify"};
    app.require_subcommand(1);
    Config cfg;

    auto common = [&](CLI::App* sub, bool input) {
        sub->add_option("--variant", cfg.variant, "abpd, abed, abps or abes");
        sub->add_option("--format", cfg.format, "text, structured or dot");
        sub->add_option("--out", cfg.out, "write output to this file");
        if (input) sub->add_option("input", cfg.input, "DIMACS, QDIMACS or G2 file");
    };
    auto caps = [&](CLI::App* sub) {
        sub->add_option("--state-cap", cfg.state_cap, "maximum configurations the solver may explore");
        sub->add_option("--time-limit", cfg.time_limit, "seconds before the solver gives up");
        sub->add_option("--max-birds-override", cfg.max_birds, "replace the level's bird budget");
    };

    auto* reduce_cmd = app.add_subcommand("reduce", "build the level and print its summary, circuit or DOT");
    common(reduce_cmd, true);
    auto* solve_cmd = app.add_subcommand("solve", "decide whether the level can be won within its bird budget");
    common(solve_cmd, true);
    caps(solve_cmd);
    auto* play_cmd = app.add_subcommand("play", "run a strategy file or the built-in policy and print the transcript");
    common(play_cmd, true);
    caps(play_cmd);
    play_cmd->add_option("--strategy", cfg.strategy, "one shot target per line");
    play_cmd->add_option("--seed", cfg.seed, "Random gate seed (stochastic variants)");
    play_cmd->add_option("--assign", cfg.assign, "existential values for the built-in policy, e.g. 1=1,2=0");
    play_cmd->add_flag("--all-resolutions", cfg.all_resolutions, "play the built-in policy against every Random outcome");
    auto* oracle_cmd = app.add_subcommand("oracle", "run the brute-force oracle for the source problem");
    common(oracle_cmd, true);
    auto* verify_cmd = app.add_subcommand("verify", "check solver verdicts against the oracle on every small instance");
    common(verify_cmd, false);
    caps(verify_cmd);
    verify_cmd->add_option("--max-vars", cfg.max_vars, "variables (ABES: per side)");
    verify_cmd->add_option("--max-clauses", cfg.max_clauses, "clauses (ABES: terms per formula)");
    verify_cmd->add_option("--include", cfg.include, "extra instance files to check");
    auto* export_cmd = app.add_subcommand("export", "write the circuit, level description or gadget transition tables");
    common(export_cmd, true);
    export_cmd->add_option("--what", cfg.what, "circuit, level or transitions");
    export_cmd->callback([&] {
        if (cfg.format == "text" && cfg.what != "transitions") cfg.format = cfg.what == "circuit" ? "dot" : "structured";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*reduce_cmd) return cmd_reduce(cfg);
        if (*solve_cmd) return cmd_solve(cfg);
        if (*play_cmd) return cmd_play(cfg);
        if (*oracle_cmd) return cmd_oracle(cfg);
        if (*verify_cmd) return cmd_verify(cfg);
        if (*export_cmd) return cmd_export(cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
