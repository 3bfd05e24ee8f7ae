#pragma once

#include <vector>

#include "tma/scenario.hpp"

namespace tma {

// Where a flight starts this optimization: the waypoint it is committed to
// reach next (or is at), the pinned time of that arrival, and holding already
// commanded there that cannot be cancelled.
struct FlightAnchor {
    int flight_id = 0;
    int waypoint = 0;
    double ready_time = 0.0;        // DS: pinned arrival time at the anchor
    double committed_holding = 0.0; // residual holding that must still run
    bool in_tma = false;            // false while the arrival is boundary data
    WakeCategory wake = WakeCategory::Medium;
};

// A completed waypoint passage from earlier in the run. Constraints of new
// schedules must keep clear of these times.
struct FrozenPassage {
    int flight_id = 0;
    int waypoint = 0;
    double arrival = 0.0;
    double departure = 0.0;
    int departed_to = -1; // waypoint id of the link taken out, -1 at landing
    WakeCategory wake = WakeCategory::Medium;
};

// A (possibly mid-flight) scheduling problem: the slice of traffic visible to
// one optimization call.
struct HorizonProblem {
    const TmaNetwork* net = nullptr;
    std::vector<FlightAnchor> flights; // sorted by flight_id
    SeparationPolicy separation;
    double max_holding = 600.0;
    double clock = 0.0;
    std::vector<FrozenPassage> frozen;

    static HorizonProblem from_scenario(const Scenario& scn);

    // Worst-case separation between the two flights, order unknown.
    double pair_gap(const FlightAnchor& a, const FlightAnchor& b) const {
        return separation.pair_gap(a.wake, b.wake);
    }

    void validate() const;
};

} // namespace tma
