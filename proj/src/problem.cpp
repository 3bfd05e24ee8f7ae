#include "tma/problem.hpp"

#include <algorithm>
#include <cmath>

namespace tma {

HorizonProblem HorizonProblem::from_scenario(const Scenario& scn) {
    HorizonProblem hp;
    hp.net = scn.network;
    hp.separation = scn.separation;
    hp.max_holding = scn.max_holding;
    hp.clock = 0.0;
    for (const Flight& f : scn.flights) {
        FlightAnchor a;
        a.flight_id = f.id;
        a.waypoint = f.entry_waypoint;
        a.ready_time = f.planning_entry_time();
        a.committed_holding = 0.0;
        a.in_tma = false;
        a.wake = f.wake;
        hp.flights.push_back(a);
    }
    std::sort(hp.flights.begin(), hp.flights.end(),
              [](const FlightAnchor& a, const FlightAnchor& b) { return a.flight_id < b.flight_id; });
    return hp;
}

void HorizonProblem::validate() const {
    if (!net) throw ValidationError("horizon problem has no network");
    for (std::size_t i = 0; i < flights.size(); ++i) {
        const FlightAnchor& a = flights[i];
        if (i > 0 && flights[i - 1].flight_id >= a.flight_id) {
            throw ValidationError("horizon flights not sorted by unique id");
        }
        net->waypoint(a.waypoint); // throws if unknown
        if (!std::isfinite(a.ready_time) || a.ready_time < clock) {
            throw ValidationError("flight " + std::to_string(a.flight_id) +
                                  " anchored before the current clock");
        }
        if (a.committed_holding < 0.0 || !std::isfinite(a.committed_holding)) {
            throw ValidationError("flight " + std::to_string(a.flight_id) +
                                  " has invalid committed holding");
        }
        if (!net->runway_reachable(a.waypoint)) {
            throw ValidationError("flight " + std::to_string(a.flight_id) +
                                  " anchored at waypoint " + std::to_string(a.waypoint) +
                                  " with no reachable runway");
        }
    }
    for (const FrozenPassage& p : frozen) {
        net->waypoint(p.waypoint);
        if (p.departure + 1e-9 < p.arrival) throw ValidationError("frozen passage departs before arrival");
    }
}

} // namespace tma
