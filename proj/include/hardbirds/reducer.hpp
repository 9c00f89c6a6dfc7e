#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hardbirds/formula.hpp"
#include "hardbirds/gadgets.hpp"
#include "hardbirds/gates.hpp"

namespace hardbirds {

using BigInt = boost::multiprecision::cpp_int;

enum class Variant { ABPD, ABED, ABPS, ABES };
std::string_view to_string(Variant v);
/// Accepts the lower-case acronyms used on the command line.
std::optional<Variant> variant_from(std::string_view s);
bool is_stochastic(Variant v);

using SourceProblem = std::variant<CnfFormula, QbfFormula, G2Setup>;

struct GadgetInstance {
    std::string name;  // e.g. "EQ_1", "UQF_4", "CL_2", "FINISH"
    GadgetBlueprint blueprint;
    int column = 0;  // 0 main column, 1 the UQF column
    int row = 0;     // top to bottom across the whole level
    std::vector<GateId> gates;  // blueprint gate index -> circuit gate

    GateId gate(std::string_view role) const { return gates.at(blueprint.role_index(role)); }
    Port port(std::string_view label) const;
    std::vector<Port> ports(std::string_view label) const;
};

struct Setter {
    Var var;
    bool value;
};

struct ReductionOutput {
    Variant variant;
    Circuit circuit;
    std::vector<GadgetInstance> gadgets;
    BigInt bird_budget;
    SourceProblem source;
    /// Birds fired into these ports before play starts (enabling a universal start gadget).
    std::vector<Port> prelude;
    /// Closing this gate makes the pig unreachable for good.
    std::optional<GateId> pig_guard;
    /// Gadget exits whose traversal assigns a variable.
    std::map<Port, Setter> setters;

    const GadgetInstance& gadget(std::string_view name) const;
    const GadgetInstance* find_gadget(std::string_view name) const;
    std::vector<std::string> manifest() const;  // entrance names in shot-target order
    std::map<GadgetKind, int> inventory() const;
    std::size_t tunnel_count() const { return circuit.tunnels().size(); }
};

ReductionOutput reduce_abpd(const CnfFormula& f);
ReductionOutput reduce_abed(const QbfFormula& q);
ReductionOutput reduce_abps(const QbfFormula& q);
ReductionOutput reduce_abes(const G2Setup& s);
/// Dispatches on the variant; throws InvalidArgument when the source kind does not fit.
ReductionOutput reduce(Variant v, const SourceProblem& source);

/// validate_circuit with the prelude ports counted as bird sources.
ValidationReport validate_reduction(const ReductionOutput& r);

/// Budget closed forms, usable without building a circuit.
BigInt abpd_budget(int vars, int clauses);
BigInt abed_budget(int clauses, int existentials, int universals);
BigInt abps_budget(int existentials, int universals, int clauses);
BigInt abes_budget(int player_vars, int all_vars);

struct PhysicsParams {
    double g = 10.0;
    double v_max = 100.0;
    double gate_width = 1.0;
    double gate_height = 1.0;
    double tunnel_width = 1.0;
};

struct Point {
    double x, y;
};

struct Box {
    std::string name;
    double x, y, w, h;
};

struct TunnelRoute {
    std::string from;  // "<gate>.<port>" or "slingshot strip"
    std::string to;
    std::vector<Point> path;
};

/// The level tuple (L_x, L_y, slingshot, birds, pigs, other) in a top-left-origin
/// frame with y growing downward.
struct LevelDescription {
    double width = 0, height = 0;
    Point slingshot{0, 0};
    double apex_height = 0;
    double strip_depth = 0;  // reachability depth below the slingshot
    double strip_width = 0;
    std::vector<std::string> bird_list;           // explicit form
    std::optional<std::pair<std::string, BigInt>> bird_count;  // binary-count form
    std::vector<Point> pigs;
    std::vector<Box> gadgets;
    std::vector<TunnelRoute> tunnels;
    std::vector<std::pair<std::string, double>> entrance_x;  // entrance name -> x inside the strip
};

/// Throws InvalidArgument on nonpositive parameters or when the reduction has no entrances.
LevelDescription annotate_geometry(const ReductionOutput& r, const PhysicsParams& p);
std::string level_to_json(const LevelDescription& level, const ReductionOutput& r);

/// Structured summary: variant, budget, inventory, manifest, circuit.
std::string reduction_to_json(const ReductionOutput& r);

}  // namespace hardbirds
