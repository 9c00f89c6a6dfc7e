#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "engine_internal.hpp"
#include "hardbirds/engine.hpp"

namespace hardbirds {

std::string_view to_string(GameStatus s) {
    switch (s) {
        case GameStatus::Win: return "win";
        case GameStatus::Loss: return "loss";
        case GameStatus::Ongoing: return "ongoing";
    }
    return "?";
}

std::string SimState::serialize() const {
    std::string out = gates.serialize() + "/" + birds_remaining.str() + "/";
    out += pig_alive ? 'p' : '-';
    out += doomed ? 'd' : '-';
    if (ordering_phase) out += "/" + std::string(to_string(*ordering_phase));
    return out;
}

namespace detail {

void refresh_flags(const ReductionOutput& r, SimState& s) {
    if (r.pig_guard && !s.gates.open(*r.pig_guard)) s.doomed = true;
    if (r.variant == Variant::ABES) {
        const auto& ord = r.gadget("ORD");
        std::vector<GatePosition> pos;
        for (auto g : ord.gates) pos.push_back(s.gates.position(g));
        s.ordering_phase = std::get<OrderingState>(gadget_state(ord.blueprint, pos)).phase;
    }
}

std::vector<Setter> setters_on(const ReductionOutput& r, const Flight& f) {
    std::vector<Setter> out;
    for (const auto& step : f.trace) {
        if (!step.exited) continue;
        auto it = r.setters.find(Port{step.gate, *step.exited});
        if (it != r.setters.end()) out.push_back(it->second);
    }
    return out;
}

FireResult apply_flight(const ReductionOutput& r, const SimState& s, std::string_view target, Flight&& f) {
    FireResult out{s, {std::string(target), f.outcome, std::move(f.resolutions), {}, 0}};
    out.state.gates = std::move(f.state);
    out.state.birds_remaining -= 1;
    if (f.outcome.kind == OutcomeKind::PigKilled) out.state.pig_alive = false;
    refresh_flags(r, out.state);
    out.record.assigned = setters_on(r, f);
    out.record.state_hash = out.state.gates.hash();
    return out;
}

Port shot_port(const ReductionOutput& r, const SimState& s, std::string_view target) {
    auto port = r.circuit.entrance(target);
    if (!port) throw InvalidArgument("unknown shot target '" + std::string(target) + "'");
    if (s.birds_remaining <= 0) throw InvalidArgument("no birds left");
    if (!s.pig_alive) throw InvalidArgument("the pig is already dead");
    return *port;
}

SimState bare_state(const ReductionOutput& r) {
    SimState s;
    s.gates = r.circuit.initial_state();
    s.birds_remaining = r.bird_budget;
    refresh_flags(r, s);
    return s;
}

Start run_prelude(const ReductionOutput& r, Resolver& resolver) {
    Start st{bare_state(r), {}};
    for (const auto& p : r.prelude) {
        auto f = propagate_bird(r.circuit, st.state.gates, p, resolver);
        auto set = setters_on(r, f);
        st.assigned.insert(st.assigned.end(), set.begin(), set.end());
        st.state.gates = std::move(f.state);
        if (f.outcome.kind == OutcomeKind::PigKilled) st.state.pig_alive = false;
    }
    refresh_flags(r, st.state);
    return st;
}

std::vector<Start> enumerate_preludes(const ReductionOutput& r) {
    std::vector<Start> frontier{{bare_state(r), {}}};
    for (const auto& p : r.prelude) {
        std::vector<Start> next;
        for (const auto& st : frontier) {
            for (auto& f : enumerate_flights(r.circuit, st.state.gates, p)) {
                Start t = st;
                auto set = setters_on(r, f);
                t.assigned.insert(t.assigned.end(), set.begin(), set.end());
                t.state.gates = std::move(f.state);
                if (f.outcome.kind == OutcomeKind::PigKilled) t.state.pig_alive = false;
                refresh_flags(r, t.state);
                next.push_back(std::move(t));
            }
        }
        frontier = std::move(next);
    }
    return frontier;
}

}  // namespace detail

SimState initial_sim_state(const ReductionOutput& r, Resolver& prelude) { return detail::run_prelude(r, prelude).state; }

std::vector<SimState> initial_sim_states(const ReductionOutput& r) {
    std::vector<SimState> out;
    for (auto& st : detail::enumerate_preludes(r))
        if (std::find(out.begin(), out.end(), st.state) == out.end()) out.push_back(std::move(st.state));
    return out;
}

FireResult fire(const ReductionOutput& r, const SimState& s, std::string_view target, Resolver& resolver) {
    Port port = detail::shot_port(r, s, target);
    return detail::apply_flight(r, s, target, propagate_bird(r.circuit, s.gates, port, resolver));
}

Outcome status_of(const SimState& s, const BigInt& shots_used) {
    if (!s.pig_alive) return {GameStatus::Win, shots_used};
    if (s.doomed || s.birds_remaining <= 0) return {GameStatus::Loss, shots_used};
    return {GameStatus::Ongoing, shots_used};
}

Outcome run_strategy(const ReductionOutput& r, const std::vector<std::string>& shots, Resolver& resolver,
                     std::vector<ShotRecord>* transcript) {
    SimState s = initial_sim_state(r, resolver);
    BigInt used = 0;
    for (const auto& shot : shots) {
        if (status_of(s, used).status != GameStatus::Ongoing) break;
        auto res = fire(r, s, shot, resolver);
        s = std::move(res.state);
        ++used;
        if (transcript) transcript->push_back(std::move(res.record));
    }
    return status_of(s, used);
}

std::vector<std::string> parse_strategy(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(b, e - b + 1));
    }
    return out;
}

std::string format_strategy(const std::vector<std::string>& shots) {
    std::string out;
    for (const auto& s : shots) out += s + "\n";
    return out;
}

namespace {

std::string resolutions_text(const std::vector<RandomResolution>& rs) {
    if (rs.empty()) return "-";
    std::string out;
    for (auto x : rs) out += to_string(x).substr(0, 1);
    return out;
}

std::string assigned_text(const std::vector<Setter>& as) {
    if (as.empty()) return "-";
    std::string out;
    for (const auto& a : as) out += (out.empty() ? "" : ",") + std::string(a.value ? "" : "!") + "x" + std::to_string(a.var);
    return out;
}

std::string outcome_text(const BirdOutcome& o) {
    return o.kind == OutcomeKind::ExitedAt ? "exit:" + o.exit_name : std::string(to_string(o.kind));
}

}  // namespace

std::string format_transcript(const std::vector<ShotRecord>& transcript) {
    std::ostringstream os;
    for (std::size_t i = 0; i < transcript.size(); ++i) {
        const auto& t = transcript[i];
        os << std::setw(4) << i + 1 << "  " << std::left << std::setw(16) << t.target << std::setw(12) << outcome_text(t.outcome)
           << std::setw(6) << resolutions_text(t.resolutions) << std::setw(14) << assigned_text(t.assigned) << std::right
           << std::hex << std::setw(16) << std::setfill('0') << t.state_hash << std::dec << std::setfill(' ') << "\n";
    }
    return os.str();
}

std::string transcript_to_json(const std::vector<ShotRecord>& transcript, const Outcome& outcome) {
    nlohmann::json j;
    j["status"] = std::string(to_string(outcome.status));
    j["shots_used"] = outcome.shots_used.str();
    j["steps"] = nlohmann::json::array();
    for (const auto& t : transcript) {
        nlohmann::json step;
        step["shot"] = t.target;
        step["outcome"] = outcome_text(t.outcome);
        step["resolutions"] = resolutions_text(t.resolutions);
        step["assigned"] = nlohmann::json::array();
        for (const auto& a : t.assigned) step["assigned"].push_back({{"var", a.var}, {"value", a.value}});
        std::ostringstream h;
        h << std::hex << std::setw(16) << std::setfill('0') << t.state_hash;
        step["state_hash"] = h.str();
        j["steps"].push_back(step);
    }
    return j.dump(2);
}

}  // namespace hardbirds
