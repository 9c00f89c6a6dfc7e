#pragma once

#include <string>
#include <vector>

#include "hardbirds/gadgets.hpp"

// Executable statements of the per-gadget behavior claims, checked over every state of
// the behavior table and over every shot sequence up to a length bound.
struct BehaviorResult {
    std::string gadget;
    std::string statement;
    long long cases = 0;
    std::vector<std::string> violations;
};

std::vector<BehaviorResult> check_gadget_behaviors(int max_sequence_length);
