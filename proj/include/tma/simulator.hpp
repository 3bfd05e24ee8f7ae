#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tma/network.hpp"
#include "tma/schedule.hpp"

namespace tma {

enum class DisturbanceDistribution { UniformSymmetric, UniformPositive };

DisturbanceDistribution distribution_from_string(const std::string& s);

struct DisturbanceConfig {
    double xi_arr = 0.0;
    double xi_hld = 0.0;
    double xi_ob = 0.0;
    DisturbanceDistribution distribution = DisturbanceDistribution::UniformSymmetric;
    std::uint64_t seed = 0;

    static DisturbanceConfig uniform(double xi, std::uint64_t seed_) {
        return {xi, xi, xi, DisturbanceDistribution::UniformSymmetric, seed_};
    }
};

// Per-flight plant state: the next waypoint, the remaining time to reach it,
// the remaining holding there, and the commanded sequences.
struct FlightSimState {
    int flight_id = 0;
    int next_waypoint = 0;
    double remaining_arrival = 0.0;
    double remaining_holding = 0.0;
    std::vector<int> cmd_wp;
    std::vector<double> cmd_arr; // remaining seconds until each commanded waypoint
    std::vector<double> cmd_hld; // holding seconds at each commanded waypoint
    bool landed = false;
    double landing_clock = 0.0;
    bool arrived_current = false; // reached next_waypoint, loitering there

    bool has_commands() const { return !cmd_wp.empty(); }
};

enum class SimEventKind { Depart, Arrive, HoldStart, Land };

std::string to_string(SimEventKind k);

struct SimEvent {
    double clock;
    int flight_id;
    SimEventKind kind;
    int waypoint;
};

struct Observation {
    int flight_id;
    int next_waypoint;
    double remaining_arrival;
    double remaining_holding;
};

// Discrete-time plant, dt fixed at 1 s. Deterministic: the trajectory is a
// function of (flights, command stream, disturbance config).
class Simulator {
public:
    explicit Simulator(const TmaNetwork& net) : net_(&net) {}

    void add_flight(int flight_id, int entry_waypoint, double remaining_arrival);

    // One unit step. Pass a config to scale newly loaded arrival/holding
    // times by (1 + xi) draws; a config with all-zero magnitudes reproduces
    // the nominal update exactly.
    void step(const DisturbanceConfig* disturbance = nullptr);

    // Noisy state estimate: waypoint exact, times scaled by (1 + xi_ob).
    std::vector<Observation> observe(const DisturbanceConfig* disturbance = nullptr) const;

    // Replaces a flight's command sequences from a schedule. The remaining
    // time of an in-progress link traversal is never rewritten. Landed
    // flights are left untouched.
    void load_commands(const FlightSchedule& fs);

    double clock() const { return clock_; }
    bool all_landed() const;
    const std::vector<FlightSimState>& flights() const { return flights_; }
    const FlightSimState* find(int flight_id) const;
    FlightSimState* find(int flight_id);
    double landing_clock(int flight_id) const;

    const std::vector<SimEvent>& events() const { return events_; }

private:
    const TmaNetwork* net_;
    double clock_ = 0.0;
    std::vector<FlightSimState> flights_;
    std::vector<SimEvent> events_;
};

std::string trace_csv(const std::vector<SimEvent>& events);

} // namespace tma
