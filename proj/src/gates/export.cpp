#include <json.hpp>
#include <sstream>

#include "hardbirds/gates.hpp"

namespace hardbirds {

using nlohmann::json;

namespace {

json port_json(const Port& p) { return {{"gate", p.gate}, {"port", std::string(to_string(p.name))}}; }

Port port_from(const json& j) {
    auto name = port_name_from(j.at("port").get<std::string>());
    if (!name) throw ParseError("unknown port name '" + j.at("port").get<std::string>() + "'");
    return {j.at("gate").get<GateId>(), *name};
}

}  // namespace

std::string circuit_to_json(const Circuit& c) {
    json gates = json::array();
    for (GateId g = 0; g < c.gate_count(); ++g) {
        const auto& info = c.gate(g);
        json j = {{"id", g}, {"label", info.label}, {"kind", std::string(to_string(info.kind))}};
        j["initial"] = info.initial ? json(*info.initial == kOpen ? "open" : "closed") : json(nullptr);
        gates.push_back(std::move(j));
    }
    json tunnels = json::array();
    for (const auto& [from, to] : c.tunnels()) {
        json j = {{"from", port_json(from)}};
        if (auto* p = std::get_if<Port>(&to)) j["to"] = port_json(*p);
        else if (auto* s = std::get_if<Sink>(&to)) j["to"] = {{"sink", *s == Sink::Pig ? "pig" : "consume"}};
        else j["to"] = {{"exit", std::get<NamedExit>(to).name}};
        tunnels.push_back(std::move(j));
    }
    json entrances = json::array();
    for (const auto& [name, port] : c.entrances()) {
        json j = port_json(port);
        j["name"] = name;
        entrances.push_back(std::move(j));
    }
    json doc = {{"gates", gates}, {"tunnels", tunnels}, {"entrances", entrances}};
    return doc.dump(2) + "\n";
}

Circuit circuit_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed circuit document: ") + e.what());
    }
    Circuit c;
    try {
        for (const auto& g : doc.at("gates")) {
            auto kind = gate_kind_from(g.at("kind").get<std::string>());
            if (!kind) throw ParseError("unknown gate kind '" + g.at("kind").get<std::string>() + "'");
            std::optional<GatePosition> pos;
            if (!g.at("initial").is_null()) {
                auto s = g.at("initial").get<std::string>();
                if (s != "open" && s != "closed") throw ParseError("initial must be open, closed or null");
                pos = s == "open" ? kOpen : kClosed;
            }
            if (g.at("id").get<GateId>() != c.gate_count()) throw ParseError("gate ids must be dense and ascending");
            c.add_gate(*kind, pos, g.at("label").get<std::string>());
        }
        for (const auto& t : doc.at("tunnels")) {
            Port from = port_from(t.at("from"));
            const auto& to = t.at("to");
            if (to.contains("sink")) {
                auto s = to.at("sink").get<std::string>();
                if (s != "pig" && s != "consume") throw ParseError("unknown sink '" + s + "'");
                c.add_tunnel(from, s == "pig" ? Sink::Pig : Sink::Consume);
            } else if (to.contains("exit")) {
                c.add_tunnel(from, NamedExit{to.at("exit").get<std::string>()});
            } else {
                c.add_tunnel(from, port_from(to));
            }
        }
        for (const auto& e : doc.at("entrances")) c.add_entrance(e.at("name").get<std::string>(), port_from(e));
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed circuit document: ") + e.what());
    }
    return c;
}

std::string circuit_to_dot(const Circuit& c, std::string_view name) {
    std::ostringstream os;
    os << "digraph \"" << name << "\" {\n  rankdir=TB;\n  node [fontname=\"Helvetica\"];\n";
    for (GateId g = 0; g < c.gate_count(); ++g) {
        const auto& info = c.gate(g);
        const char* shape = "box";
        switch (info.kind) {
            case GateKind::Selector: shape = "box"; break;
            case GateKind::AUT: shape = "circle"; break;
            case GateKind::Random: shape = "triangle"; break;
            case GateKind::Crossover: shape = "diamond"; break;
        }
        os << "  g" << g << " [label=\"" << info.label << "\", shape=" << shape;
        if (info.initial == kOpen) os << ", peripheries=2";
        os << "];\n";
    }
    bool pig = false, consume = false;
    std::map<std::string, bool> exits;
    for (const auto& [from, to] : c.tunnels()) {
        os << "  g" << from.gate << " -> ";
        if (auto* p = std::get_if<Port>(&to)) {
            os << "g" << p->gate << " [taillabel=\"" << to_string(from.name) << "\", headlabel=\"" << to_string(p->name) << "\"];\n";
            continue;
        }
        if (auto* s = std::get_if<Sink>(&to)) {
            if (*s == Sink::Pig) pig = true, os << "pig";
            else consume = true, os << "consume";
        } else {
            const auto& e = std::get<NamedExit>(to).name;
            exits[e] = true;
            os << "\"exit:" << e << "\"";
        }
        os << " [taillabel=\"" << to_string(from.name) << "\"];\n";
    }
    for (const auto& [entrance, port] : c.entrances()) {
        os << "  \"in:" << entrance << "\" [shape=plaintext, label=\"" << entrance << "\"];\n";
        os << "  \"in:" << entrance << "\" -> g" << port.gate << " [headlabel=\"" << to_string(port.name) << "\", style=dashed];\n";
    }
    if (pig) os << "  pig [shape=doublecircle, label=\"pig\"];\n";
    if (consume) os << "  consume [shape=point];\n";
    for (const auto& [e, unused] : exits) os << "  \"exit:" << e << "\" [shape=plaintext, label=\"" << e << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace hardbirds
