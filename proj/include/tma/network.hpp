#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tma {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class WaypointKind { Entry, Internal, Runway };

WaypointKind waypoint_kind_from_string(const std::string& s);
std::string to_string(WaypointKind k);

struct Waypoint {
    int id = 0;
    std::string name;
    double x_nm = 0.0; // display/debug only, never used by the dynamics
    double y_nm = 0.0;
    WaypointKind kind = WaypointKind::Internal;
    bool holding_allowed = false;
};

struct Link {
    int from = 0;
    int to = 0;
    double distance_nm = 0.0;
    // Seconds per nautical mile, strictly increasing (fastest first).
    std::vector<double> paces_s_per_nm;

    double fastest_pace() const { return paces_s_per_nm.front(); }
    double slowest_pace() const { return paces_s_per_nm.back(); }
    double travel_time(std::size_t level) const { return distance_nm * paces_s_per_nm.at(level); }
    double min_travel_time() const { return distance_nm * fastest_pace(); }
    double max_travel_time() const { return distance_nm * slowest_pace(); }
};

// Directed acyclic route graph of the terminal area. Immutable after load;
// safe to share read-only across threads.
class TmaNetwork {
public:
    TmaNetwork(std::vector<Waypoint> waypoints, std::vector<Link> links);

    const std::vector<Waypoint>& waypoints() const { return waypoints_; }
    const std::vector<Link>& links() const { return links_; }

    bool has_waypoint(int id) const;
    const Waypoint& waypoint(int id) const;
    const Link& link(std::size_t index) const { return links_[index]; }

    // Indices into links() leaving / entering a waypoint.
    const std::vector<std::size_t>& out_links(int id) const;
    const std::vector<std::size_t>& in_links(int id) const;

    bool adjacent(int from, int to) const;
    // Index of link from->to, or npos.
    std::size_t link_index(int from, int to) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::vector<int> entry_ids() const;
    std::vector<int> runway_ids() const;

    // Waypoint ids in a stable topological order (ties broken by id).
    const std::vector<int>& topological_order() const { return topo_order_; }

    // Minimum time to any runway using the fastest pace on every link and
    // zero holding. Zero when `from` is itself a runway. Throws
    // ValidationError when no runway is reachable.
    double ideal_travel_time(int from) const;

    // Longest time to any runway using the slowest pace on every link;
    // used for horizon bounds. Zero for runways.
    double worst_travel_time(int from) const;

    bool runway_reachable(int from) const;

    std::string name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

private:
    void validate_and_index();

    std::string name_;
    std::vector<Waypoint> waypoints_;
    std::vector<Link> links_;
    std::vector<std::size_t> id_to_index_;
    std::vector<std::vector<std::size_t>> out_links_;
    std::vector<std::vector<std::size_t>> in_links_;
    std::vector<int> topo_order_;
    std::vector<double> ideal_to_runway_;
    std::vector<double> worst_to_runway_;

    std::size_t index_of(int id) const;
};

// Parses and validates the JSON network format described in the README.
TmaNetwork load_network(const std::string& source);
TmaNetwork load_network_file(const std::string& path);

} // namespace tma
