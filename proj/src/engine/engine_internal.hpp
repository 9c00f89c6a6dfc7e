#pragma once

#include "hardbirds/engine.hpp"

namespace hardbirds::detail {

void refresh_flags(const ReductionOutput& r, SimState& s);
FireResult apply_flight(const ReductionOutput& r, const SimState& s, std::string_view target, Flight&& f);
Port shot_port(const ReductionOutput& r, const SimState& s, std::string_view target);
SimState bare_state(const ReductionOutput& r);

struct Start {
    SimState state;
    std::vector<Setter> assigned;  // set by the prelude birds
};
Start run_prelude(const ReductionOutput& r, Resolver& resolver);
std::vector<Start> enumerate_preludes(const ReductionOutput& r);
std::vector<Setter> setters_on(const ReductionOutput& r, const Flight& f);

}  // namespace hardbirds::detail
