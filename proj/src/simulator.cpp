#include "tma/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tma/rng.hpp"

namespace tma {

namespace {

enum DrawPurpose : std::uint64_t { kDrawArr = 1, kDrawHld = 2, kDrawObserve = 3 };

double draw_xi(const DisturbanceConfig& cfg, double magnitude, double clock, int flight_id,
               std::uint64_t purpose) {
    if (magnitude <= 0.0) return 0.0;
    double u = keyed_unit_double(cfg.seed, static_cast<std::uint64_t>(std::llround(clock)),
                                 static_cast<std::uint64_t>(flight_id), purpose);
    switch (cfg.distribution) {
    case DisturbanceDistribution::UniformSymmetric: return magnitude * (2.0 * u - 1.0);
    case DisturbanceDistribution::UniformPositive: return magnitude * u;
    }
    return 0.0;
}

} // namespace

DisturbanceDistribution distribution_from_string(const std::string& s) {
    if (s == "uniform_symmetric") return DisturbanceDistribution::UniformSymmetric;
    if (s == "uniform_positive") return DisturbanceDistribution::UniformPositive;
    throw ParseError("unknown disturbance distribution '" + s + "'");
}

std::string to_string(SimEventKind k) {
    switch (k) {
    case SimEventKind::Depart: return "depart";
    case SimEventKind::Arrive: return "arrive";
    case SimEventKind::HoldStart: return "hold_start";
    case SimEventKind::Land: return "land";
    }
    return "?";
}

void Simulator::add_flight(int flight_id, int entry_waypoint, double remaining_arrival) {
    if (find(flight_id)) throw ValidationError("flight " + std::to_string(flight_id) + " already simulated");
    FlightSimState st;
    st.flight_id = flight_id;
    st.next_waypoint = entry_waypoint;
    st.remaining_arrival = remaining_arrival;
    st.remaining_holding = 0.0;
    flights_.push_back(std::move(st));
    std::sort(flights_.begin(), flights_.end(),
              [](const FlightSimState& a, const FlightSimState& b) {
                  return a.flight_id < b.flight_id;
              });
}

void Simulator::step(const DisturbanceConfig* disturbance) {
    for (FlightSimState& f : flights_) {
        if (f.landed) continue;
        if (!f.has_commands()) {
            throw ValidationError("flight " + std::to_string(f.flight_id) +
                                  " has no commands to execute");
        }
        double t_arr = f.remaining_arrival;
        double t_hld = f.remaining_holding;

        if (t_arr >= 1.0) {
            // Still on the way to the next waypoint.
            f.remaining_arrival = t_arr - 1.0;
            for (double& t : f.cmd_arr) t -= 1.0;
            continue;
        }
        if (t_hld >= 1.0 - t_arr) {
            // Arrives (or already arrived) and holds there.
            if (!f.arrived_current) {
                double at = clock_ + std::max(0.0, t_arr);
                events_.push_back({at, f.flight_id, SimEventKind::Arrive, f.next_waypoint});
                events_.push_back({at, f.flight_id, SimEventKind::HoldStart, f.next_waypoint});
                f.arrived_current = true;
            }
            f.remaining_arrival = 0.0;
            f.remaining_holding = t_hld - (1.0 - t_arr);
            for (double& t : f.cmd_arr) t -= 1.0;
            continue;
        }

        // Leaves the current waypoint within this step.
        double arrive_at = clock_ + std::max(0.0, t_arr);
        if (!f.arrived_current && f.cmd_wp.size() > 1) {
            events_.push_back({arrive_at, f.flight_id, SimEventKind::Arrive, f.next_waypoint});
        }
        if (f.cmd_wp.size() == 1) {
            const Waypoint& w = net_->waypoint(f.next_waypoint);
            if (w.kind != WaypointKind::Runway) {
                throw ValidationError("flight " + std::to_string(f.flight_id) +
                                      " exhausted its commands before a runway (at waypoint " +
                                      std::to_string(f.next_waypoint) + ")");
            }
            f.landed = true;
            f.landing_clock = clock_ + std::max(0.0, t_arr);
            f.cmd_wp.clear();
            f.cmd_arr.clear();
            f.cmd_hld.clear();
            f.remaining_arrival = 0.0;
            f.remaining_holding = 0.0;
            events_.push_back({f.landing_clock, f.flight_id, SimEventKind::Land, w.id});
            continue;
        }

        double depart_at = clock_ + std::max(0.0, std::max(0.0, t_arr) + std::max(0.0, t_hld));
        events_.push_back({depart_at, f.flight_id, SimEventKind::Depart, f.next_waypoint});
        for (double& t : f.cmd_arr) t -= 1.0;
        f.cmd_wp.erase(f.cmd_wp.begin());
        f.cmd_arr.erase(f.cmd_arr.begin());
        f.cmd_hld.erase(f.cmd_hld.begin());
        f.next_waypoint = f.cmd_wp.front();
        f.arrived_current = false;
        double loaded_arr = f.cmd_arr.front();
        double loaded_hld = f.cmd_hld.front();
        if (disturbance) {
            loaded_arr *= 1.0 + draw_xi(*disturbance, disturbance->xi_arr, clock_, f.flight_id,
                                        kDrawArr);
            loaded_hld *= 1.0 + draw_xi(*disturbance, disturbance->xi_hld, clock_, f.flight_id,
                                        kDrawHld);
        }
        f.remaining_arrival = loaded_arr;
        f.remaining_holding = loaded_hld;
    }
    clock_ += 1.0;
}

std::vector<Observation> Simulator::observe(const DisturbanceConfig* disturbance) const {
    std::vector<Observation> out;
    for (const FlightSimState& f : flights_) {
        if (f.landed) continue;
        Observation ob{f.flight_id, f.next_waypoint, f.remaining_arrival, f.remaining_holding};
        if (disturbance && disturbance->xi_ob > 0.0) {
            double xi = draw_xi(*disturbance, disturbance->xi_ob, clock_, f.flight_id, kDrawObserve);
            ob.remaining_arrival *= 1.0 + xi;
            ob.remaining_holding *= 1.0 + xi;
        }
        out.push_back(ob);
    }
    return out;
}

void Simulator::load_commands(const FlightSchedule& fs) {
    FlightSimState* f = find(fs.flight_id);
    if (!f) throw ValidationError("schedule for unknown flight " + std::to_string(fs.flight_id));
    if (f->landed) return;
    if (fs.route.empty() || fs.route.front() != f->next_waypoint) {
        throw ValidationError("schedule for flight " + std::to_string(fs.flight_id) +
                              " starts at waypoint " +
                              std::to_string(fs.route.empty() ? -1 : fs.route.front()) +
                              " but the flight is committed to " +
                              std::to_string(f->next_waypoint));
    }
    f->cmd_wp = fs.route;
    f->cmd_arr.assign(fs.route.size(), 0.0);
    f->cmd_arr[0] = f->remaining_arrival; // in-progress traversal is physics, not command
    for (std::size_t i = 1; i < fs.route.size(); ++i) f->cmd_arr[i] = fs.arrival[i] - clock_;
    f->cmd_hld = fs.holding;
    f->remaining_holding = fs.holding.front();
}

bool Simulator::all_landed() const {
    return std::all_of(flights_.begin(), flights_.end(),
                       [](const FlightSimState& f) { return f.landed; });
}

const FlightSimState* Simulator::find(int flight_id) const {
    for (const auto& f : flights_) {
        if (f.flight_id == flight_id) return &f;
    }
    return nullptr;
}

FlightSimState* Simulator::find(int flight_id) {
    for (auto& f : flights_) {
        if (f.flight_id == flight_id) return &f;
    }
    return nullptr;
}

double Simulator::landing_clock(int flight_id) const {
    const FlightSimState* f = find(flight_id);
    if (!f || !f->landed) throw ValidationError("flight " + std::to_string(flight_id) + " not landed");
    return f->landing_clock;
}

std::string trace_csv(const std::vector<SimEvent>& events) {
    std::ostringstream os;
    os << "clock,flight,event,waypoint\n";
    char buf[96];
    for (const SimEvent& e : events) {
        std::snprintf(buf, sizeof(buf), "%.3f,%d,%s,%d\n", e.clock, e.flight_id,
                      to_string(e.kind).c_str(), e.waypoint);
        os << buf;
    }
    return os.str();
}

} // namespace tma
