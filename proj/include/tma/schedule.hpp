#pragma once

#include <string>
#include <vector>

namespace tma {

// One flight's planned movement: route waypoints with arrival/departure/
// holding times and the speed level chosen on each link.
struct FlightSchedule {
    int flight_id = 0;
    std::vector<int> route;         // waypoint ids, anchor first, runway last
    std::vector<double> arrival;    // AR per route node, seconds
    std::vector<double> departure;  // DP per route node
    std::vector<double> holding;    // HT per route node
    std::vector<int> speed_level;   // per link, index into the link's pace list

    double landing_time() const { return arrival.back(); }
};

struct Schedule {
    std::vector<FlightSchedule> flights; // sorted by flight_id
    double objective = 0.0;              // mean landing time, seconds

    const FlightSchedule* find(int flight_id) const {
        for (const auto& f : flights) {
            if (f.flight_id == flight_id) return &f;
        }
        return nullptr;
    }
};

std::string schedule_to_json(const Schedule& s);

} // namespace tma
