#pragma once

#include <vector>

#include "tma/milp_model.hpp"
#include "tma/schedule.hpp"

namespace tma {

struct PriorityPlanResult {
    Schedule schedule; // routed flights only; objective is their mean landing
    std::vector<int> infeasible_flights;
    double wall_time_s = 0.0;

    bool all_routed() const { return infeasible_flights.empty(); }
};

// Sequential priority router: flights are processed in ascending ideal
// landing time and each gets its individually earliest landing by a
// time-expanded shortest-path search (holding in 10 s increments, 1 s state
// grid), honoring every constraint against flights committed before it.
// Unroutable flights are reported, not fatal.
PriorityPlanResult solve_priority(const StructuredProblem& sp);

} // namespace tma
