#pragma once

#include <string>
#include <vector>

#include "tma/problem.hpp"
#include "tma/schedule.hpp"

namespace tma {

enum class ViolationFamily {
    RouteContinuity,
    TravelTime,
    Holding,
    WaypointSeparation,
    LinkFcfs,
    FrozenSeparation,
    Objective,
};

std::string to_string(ViolationFamily f);

struct Violation {
    ViolationFamily family;
    std::string detail;
    double magnitude; // seconds by which the constraint is missed
};

// Standalone checker for every constraint a schedule must satisfy: route
// continuity, travel-time equality, holding bounds, waypoint AR/DP
// separation, link FCFS, clearance from frozen passages and the objective
// definition. Deliberately written against the constraint definitions, not
// against the encoder.
//
// Separation applies to a flight's position at a waypoint when it arrives
// there via a link, or when it is anchored there already inside the TMA;
// boundary-entry anchors are input data and exempt.
std::vector<Violation> audit_schedule(const HorizonProblem& hp, const Schedule& schedule,
                                      double tol = 1e-6);

std::string describe(const std::vector<Violation>& violations, std::size_t max_items = 5);

} // namespace tma
