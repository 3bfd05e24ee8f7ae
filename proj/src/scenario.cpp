#include "tma/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tma/rng.hpp"

namespace tma {

WakeCategory wake_from_string(const std::string& s) {
    if (s == "Light") return WakeCategory::Light;
    if (s == "Medium") return WakeCategory::Medium;
    if (s == "Heavy") return WakeCategory::Heavy;
    throw ParseError("unknown wake category '" + s + "'");
}

std::string to_string(WakeCategory w) {
    switch (w) {
    case WakeCategory::Light: return "Light";
    case WakeCategory::Medium: return "Medium";
    case WakeCategory::Heavy: return "Heavy";
    }
    return "?";
}

double SeparationPolicy::max_gap() const {
    double m = default_gap;
    for (const auto& [k, v] : overrides) m = std::max(m, v);
    return m;
}

const Flight& Scenario::flight(int id) const {
    for (const auto& f : flights) {
        if (f.id == id) return f;
    }
    throw ValidationError("unknown flight id " + std::to_string(id));
}

bool Scenario::has_flight(int id) const {
    return std::any_of(flights.begin(), flights.end(),
                       [id](const Flight& f) { return f.id == id; });
}

namespace {

void canonicalize(Scenario& scn) {
    std::sort(scn.flights.begin(), scn.flights.end(), [](const Flight& a, const Flight& b) {
        if (a.entry_time != b.entry_time) return a.entry_time < b.entry_time;
        return a.id < b.id;
    });
}

void validate(const Scenario& scn) {
    std::vector<int> ids;
    for (const auto& f : scn.flights) {
        const Waypoint& w = scn.network->waypoint(f.entry_waypoint); // throws if unknown
        if (w.kind != WaypointKind::Entry) {
            throw ValidationError("flight " + std::to_string(f.id) + " enters at non-entry waypoint " +
                                  std::to_string(f.entry_waypoint));
        }
        if (f.entry_time < 0.0) {
            throw ValidationError("flight " + std::to_string(f.id) + " has negative entry time");
        }
        ids.push_back(f.id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw ValidationError("duplicate flight id");
    }
    if (!(scn.separation.default_gap > 0.0)) throw ValidationError("nonpositive separation gap");
    for (const auto& [k, v] : scn.separation.overrides) {
        if (!(v > 0.0)) throw ValidationError("nonpositive separation gap override");
    }
    if (scn.max_holding < 0.0) throw ValidationError("negative max holding time");
}

} // namespace

Scenario load_scenario(const std::string& source, const TmaNetwork& net) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(source);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario file: ") + e.what());
    }
    Scenario scn;
    scn.network = &net;
    try {
        for (const auto& jf : j.at("flights")) {
            Flight f;
            f.id = jf.at("id").get<int>();
            f.entry_waypoint = jf.at("entry_waypoint").get<int>();
            f.entry_time = jf.at("entry_time_s").get<double>();
            f.wake = wake_from_string(jf.value("wake", std::string("Medium")));
            if (jf.contains("predicted_entry_time_s")) {
                f.predicted_entry_time = jf.at("predicted_entry_time_s").get<double>();
            }
            scn.flights.push_back(std::move(f));
        }
        if (j.contains("separation")) {
            const auto& js = j.at("separation");
            scn.separation.default_gap = js.value("default_gap_s", 60.0);
            if (js.contains("overrides")) {
                for (const auto& jo : js.at("overrides")) {
                    WakeCategory leader = wake_from_string(jo.at("leader").get<std::string>());
                    WakeCategory follower = wake_from_string(jo.at("follower").get<std::string>());
                    scn.separation.overrides[{leader, follower}] = jo.at("gap_s").get<double>();
                }
            }
        }
        scn.max_holding = j.value("max_holding_s", 600.0);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario file: ") + e.what());
    }
    validate(scn);
    canonicalize(scn);
    return scn;
}

Scenario load_scenario_file(const std::string& path, const TmaNetwork& net) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str(), net);
}

std::string scenario_to_json(const Scenario& scn) {
    nlohmann::json j;
    j["flights"] = nlohmann::json::array();
    for (const auto& f : scn.flights) {
        nlohmann::json jf;
        jf["id"] = f.id;
        jf["entry_waypoint"] = f.entry_waypoint;
        jf["entry_time_s"] = f.entry_time;
        jf["wake"] = to_string(f.wake);
        if (f.predicted_entry_time) jf["predicted_entry_time_s"] = *f.predicted_entry_time;
        j["flights"].push_back(std::move(jf));
    }
    j["separation"]["default_gap_s"] = scn.separation.default_gap;
    if (!scn.separation.overrides.empty()) {
        auto& arr = j["separation"]["overrides"] = nlohmann::json::array();
        for (const auto& [k, v] : scn.separation.overrides) {
            arr.push_back({{"leader", to_string(k.first)},
                           {"follower", to_string(k.second)},
                           {"gap_s", v}});
        }
    }
    j["max_holding_s"] = scn.max_holding;
    return j.dump(2) + "\n";
}

Scenario generate_scenario(const TmaNetwork& net, int count, double window, double gap_min,
                           std::uint64_t seed) {
    if (count < 1) throw ValidationError("generate_scenario: count must be >= 1");
    if (!(window > 0.0)) throw ValidationError("generate_scenario: window must be > 0");
    if (gap_min < 0.0) throw ValidationError("generate_scenario: gap_min must be >= 0");

    std::vector<int> entries = net.entry_ids();
    std::sort(entries.begin(), entries.end());
    if (entries.empty()) throw ValidationError("network has no entry waypoints");

    // Flights an entry can absorb inside the window at gap_min spacing.
    std::size_t per_entry_cap = gap_min > 0.0
                                    ? static_cast<std::size_t>(window / gap_min) + 1
                                    : static_cast<std::size_t>(count);
    if (static_cast<std::size_t>(count) > per_entry_cap * entries.size()) {
        throw ValidationError("generate_scenario: " + std::to_string(count) + " flights at gap " +
                              std::to_string(gap_min) + "s exceed the window capacity across " +
                              std::to_string(entries.size()) + " entries");
    }

    Rng rng(seed);
    std::vector<std::size_t> entry_load(entries.size(), 0);
    std::vector<std::size_t> assignment(static_cast<std::size_t>(count));
    for (auto& a : assignment) {
        // Draw among entries that still have capacity.
        std::size_t open = 0;
        for (std::size_t lo : entry_load) open += (lo < per_entry_cap) ? 1 : 0;
        std::size_t pick = rng.next_below(open);
        for (std::size_t e = 0; e < entries.size(); ++e) {
            if (entry_load[e] >= per_entry_cap) continue;
            if (pick == 0) {
                a = e;
                entry_load[e]++;
                break;
            }
            --pick;
        }
    }

    Scenario scn;
    scn.network = &net;
    scn.flights.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        scn.flights[static_cast<std::size_t>(i)].id = i + 1;
        scn.flights[static_cast<std::size_t>(i)].entry_waypoint = entries[assignment[static_cast<std::size_t>(i)]];
        static const WakeCategory kWakes[3] = {WakeCategory::Medium, WakeCategory::Heavy,
                                               WakeCategory::Light};
        scn.flights[static_cast<std::size_t>(i)].wake = kWakes[rng.next_below(3)];
    }

    // Per entry: k sorted uniforms squeezed into the residual window, then
    // shifted by j*gap_min. Guarantees spacing >= gap_min and times within
    // [0, window].
    for (std::size_t e = 0; e < entries.size(); ++e) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            if (assignment[i] == e) members.push_back(i);
        }
        if (members.empty()) continue;
        std::size_t k = members.size();
        double residual = window - gap_min * static_cast<double>(k - 1);
        std::vector<double> u(k);
        for (auto& x : u) x = rng.next_double() * residual;
        std::sort(u.begin(), u.end());
        for (std::size_t jx = 0; jx < k; ++jx) {
            scn.flights[members[jx]].entry_time = u[jx] + gap_min * static_cast<double>(jx);
        }
    }

    canonicalize(scn);
    validate(scn);
    return scn;
}

double ideal_landing_time(const Scenario& scn, int flight_id) {
    const Flight& f = scn.flight(flight_id);
    return f.entry_time + scn.network->ideal_travel_time(f.entry_waypoint);
}

} // namespace tma
