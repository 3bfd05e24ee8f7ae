#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tma/network.hpp"

namespace tma {

enum class WakeCategory { Light, Medium, Heavy };

WakeCategory wake_from_string(const std::string& s);
std::string to_string(WakeCategory w);

struct Flight {
    int id = 0;
    int entry_waypoint = 0;
    double entry_time = 0.0; // seconds, the actual boundary arrival
    WakeCategory wake = WakeCategory::Medium;
    // When set, the controller plans against this value until the flight
    // enters; the simulator always uses entry_time.
    std::optional<double> predicted_entry_time;

    double planning_entry_time() const {
        return predicted_entry_time ? *predicted_entry_time : entry_time;
    }
};

struct SeparationPolicy {
    double default_gap = 60.0; // seconds
    // Ordered (leader, follower) wake-pair overrides.
    std::map<std::pair<WakeCategory, WakeCategory>, double> overrides;

    double gap(WakeCategory leader, WakeCategory follower) const {
        auto it = overrides.find({leader, follower});
        return it == overrides.end() ? default_gap : it->second;
    }
    // Pairwise gap when the order is not yet decided: the worst case of the
    // two directions, so one value serves the whole disjunction.
    double pair_gap(WakeCategory a, WakeCategory b) const {
        return std::max(gap(a, b), gap(b, a));
    }
    double max_gap() const;
};

struct Scenario {
    const TmaNetwork* network = nullptr;
    std::vector<Flight> flights; // canonical: sorted by entry_time, ties by id
    SeparationPolicy separation;
    double max_holding = 600.0; // seconds

    const Flight& flight(int id) const;
    bool has_flight(int id) const;
};

Scenario load_scenario(const std::string& source, const TmaNetwork& net);
Scenario load_scenario_file(const std::string& path, const TmaNetwork& net);
std::string scenario_to_json(const Scenario& scn);

// Seeded synthetic arrival generator. Entry waypoints are assigned randomly
// (capped at each entry's window capacity) and entry times are spread so that
// any two flights sharing an entry are at least gap_min apart. Bit-identical
// output for a fixed argument tuple.
Scenario generate_scenario(const TmaNetwork& net, int count, double window, double gap_min,
                           std::uint64_t seed);

// entry_time + ideal_travel_time(network, entry_waypoint)
double ideal_landing_time(const Scenario& scn, int flight_id);

} // namespace tma
