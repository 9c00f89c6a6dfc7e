#include <algorithm>
#include <json.hpp>

#include "hardbirds/reducer.hpp"

namespace hardbirds {

using nlohmann::json;

namespace {

std::vector<std::size_t> gadget_index(const ReductionOutput& r) {
    std::vector<std::size_t> out(r.circuit.gate_count());
    for (std::size_t i = 0; i < r.gadgets.size(); ++i)
        for (auto g : r.gadgets[i].gates) out[g] = i;
    return out;
}

std::string port_name(const Circuit& c, const Port& p) { return c.gate(p.gate).label + "." + std::string(to_string(p.name)); }

}  // namespace

LevelDescription annotate_geometry(const ReductionOutput& r, const PhysicsParams& p) {
    for (double v : {p.g, p.v_max, p.gate_width, p.gate_height, p.tunnel_width})
        if (!(v > 0)) throw InvalidArgument("physics parameters must be strictly positive");
    const auto& entrances = r.circuit.entrances();
    if (entrances.empty()) throw InvalidArgument("reduction has no entrances, so the entrance strip would have zero width");

    const auto owner_idx = gadget_index(r);
    auto owner_of = [&](const ReductionOutput&, GateId g) -> const GadgetInstance& { return r.gadgets[owner_idx.at(g)]; };
    LevelDescription level;
    const double wt = p.tunnel_width * static_cast<double>(entrances.size());
    level.strip_width = wt;
    level.apex_height = p.v_max * p.v_max / (2 * p.g);
    level.strip_depth = std::max(0.0, -wt + p.g / (p.v_max * p.v_max) * wt * wt);
    level.slingshot = {wt, level.apex_height};
    const double strip_y = level.apex_height + level.strip_depth;
    for (std::size_t i = 0; i < entrances.size(); ++i)
        level.entrance_x.emplace_back(entrances[i].first, wt + (static_cast<double>(i) + 0.5) * p.tunnel_width);

    // One gadget per row below the strip, UQF column shifted right of the widest main box.
    const double top = strip_y + 2 * p.gate_height;
    const double row_pitch = 4 * p.gate_height;
    const double x0 = 2 * wt + p.gate_width;
    double main_width = 0;
    for (const auto& g : r.gadgets)
        if (g.column == 0) main_width = std::max(main_width, 2 * p.gate_width * static_cast<double>(g.gates.size()));
    std::map<std::string, Box> box_of;
    for (const auto& g : r.gadgets) {
        Box b{g.name, g.column == 0 ? x0 : x0 + main_width + 2 * p.gate_width, top + row_pitch * g.row,
              2 * p.gate_width * static_cast<double>(g.gates.size()), 2 * p.gate_height};
        level.gadgets.push_back(b);
        box_of[g.name] = b;
    }

    auto anchor = [&](const Port& port, bool bottom) {
        const auto& inst = owner_of(r, port.gate);
        const auto& b = box_of.at(inst.name);
        auto k = std::find(inst.gates.begin(), inst.gates.end(), port.gate) - inst.gates.begin();
        return Point{b.x + (2 * static_cast<double>(k) + 1) * p.gate_width, bottom ? b.y + b.h : b.y};
    };

    for (std::size_t i = 0; i < entrances.size(); ++i) {
        const auto& [name, port] = entrances[i];
        auto end = anchor(port, false);
        double x = level.entrance_x[i].second;
        double mid = end.y - p.gate_height;
        level.tunnels.push_back({"entrance strip", name, {{x, strip_y}, {x, mid}, {end.x, mid}, end}});
    }

    double bottom = top;
    for (const auto& b : level.gadgets) bottom = std::max(bottom, b.y + b.h);
    std::optional<Point> pig_sink;
    for (const auto& [from, to] : r.circuit.tunnels()) {
        const auto& src = owner_of(r, from.gate);
        auto start = anchor(from, true);
        if (auto* port = std::get_if<Port>(&to)) {
            if (&owner_of(r, port->gate) == &src) continue;
            auto end = anchor(*port, false);
            double mid = end.y - p.gate_height;
            level.tunnels.push_back({port_name(r.circuit, from), port_name(r.circuit, *port), {start, {start.x, mid}, {end.x, mid}, end}});
        } else if (std::get_if<Sink>(&to) && std::get<Sink>(to) == Sink::Pig && !r.pig_guard) {
            // Pig sits in its own pocket below the last gadget row.
            if (!pig_sink) pig_sink = Point{x0 + p.gate_width, bottom + 2 * p.gate_height};
            level.tunnels.push_back({port_name(r.circuit, from), "pig", {start, {start.x, pig_sink->y - p.gate_height}, {pig_sink->x, pig_sink->y - p.gate_height}, *pig_sink}});
        }
    }
    if (r.pig_guard) {
        const auto& b = box_of.at(owner_of(r, *r.pig_guard).name);
        level.pigs.push_back({b.x + b.w / 2, b.y + b.h / 2});
    } else if (pig_sink) {
        level.pigs.push_back(*pig_sink);
    }

    if (r.variant == Variant::ABED || r.variant == Variant::ABES) {
        level.bird_count = std::pair{std::string("red"), r.bird_budget};
    } else {
        level.bird_list.assign(static_cast<std::size_t>(r.bird_budget), "red");
    }

    double w = 2 * wt, h = strip_y;
    for (const auto& b : level.gadgets) w = std::max(w, b.x + b.w), h = std::max(h, b.y + b.h);
    for (const auto& pig : level.pigs) w = std::max(w, pig.x + p.gate_width), h = std::max(h, pig.y + p.gate_height);
    for (const auto& t : level.tunnels)
        for (const auto& pt : t.path) w = std::max(w, pt.x), h = std::max(h, pt.y);
    level.width = w;
    level.height = h;
    return level;
}

namespace {

json point_json(const Point& p) { return json::array({p.x, p.y}); }

json inventory_json(const ReductionOutput& r) {
    json inv = json::object();
    for (const auto& [k, n] : r.inventory()) inv[std::string(to_string(k))] = n;
    return inv;
}

}  // namespace

std::string level_to_json(const LevelDescription& level, const ReductionOutput& r) {
    json j;
    j["variant"] = std::string(to_string(r.variant));
    j["L_x"] = level.width;
    j["L_y"] = level.height;
    j["slingshot"] = point_json(level.slingshot);
    if (level.bird_count) j["birds"] = json::array({level.bird_count->first, level.bird_count->second.str()});
    else j["birds"] = level.bird_list;
    j["pigs"] = json::array();
    for (const auto& p : level.pigs) j["pigs"].push_back(point_json(p));
    json other;
    other["apex_height"] = level.apex_height;
    other["strip"] = {{"x", level.strip_width}, {"y", level.slingshot.y + level.strip_depth}, {"width", level.strip_width},
                      {"depth_below_slingshot", level.strip_depth}};
    other["gadgets"] = json::array();
    for (const auto& b : level.gadgets) other["gadgets"].push_back({{"name", b.name}, {"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}});
    other["tunnels"] = json::array();
    for (const auto& t : level.tunnels) {
        json path = json::array();
        for (const auto& p : t.path) path.push_back(point_json(p));
        other["tunnels"].push_back({{"from", t.from}, {"to", t.to}, {"path", path}});
    }
    j["other"] = other;
    return j.dump(2);
}

std::string reduction_to_json(const ReductionOutput& r) {
    json j;
    j["variant"] = std::string(to_string(r.variant));
    j["bird_budget"] = r.bird_budget.str();
    j["inventory"] = inventory_json(r);
    j["gadgets"] = json::array();
    for (const auto& g : r.gadgets)
        j["gadgets"].push_back({{"name", g.name}, {"kind", std::string(to_string(g.blueprint.kind))}, {"column", g.column}, {"row", g.row}});
    j["manifest"] = r.manifest();
    j["prelude"] = json::array();
    for (const auto& p : r.prelude) j["prelude"].push_back(port_name(r.circuit, p));
    j["circuit"] = json::parse(circuit_to_json(r.circuit));
    return j.dump(2);
}

}  // namespace hardbirds
