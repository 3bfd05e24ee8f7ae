#include "tma/network.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace tma {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

WaypointKind waypoint_kind_from_string(const std::string& s) {
    if (s == "entry") return WaypointKind::Entry;
    if (s == "internal") return WaypointKind::Internal;
    if (s == "runway") return WaypointKind::Runway;
    throw ParseError("unknown waypoint kind '" + s + "'");
}

std::string to_string(WaypointKind k) {
    switch (k) {
    case WaypointKind::Entry: return "entry";
    case WaypointKind::Internal: return "internal";
    case WaypointKind::Runway: return "runway";
    }
    return "?";
}

TmaNetwork::TmaNetwork(std::vector<Waypoint> waypoints, std::vector<Link> links)
    : waypoints_(std::move(waypoints)), links_(std::move(links)) {
    validate_and_index();
}

std::size_t TmaNetwork::index_of(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= id_to_index_.size() ||
        id_to_index_[static_cast<std::size_t>(id)] == npos) {
        throw ValidationError("unknown waypoint id " + std::to_string(id));
    }
    return id_to_index_[static_cast<std::size_t>(id)];
}

bool TmaNetwork::has_waypoint(int id) const {
    return id >= 0 && static_cast<std::size_t>(id) < id_to_index_.size() &&
           id_to_index_[static_cast<std::size_t>(id)] != npos;
}

const Waypoint& TmaNetwork::waypoint(int id) const { return waypoints_[index_of(id)]; }

const std::vector<std::size_t>& TmaNetwork::out_links(int id) const {
    return out_links_[index_of(id)];
}

const std::vector<std::size_t>& TmaNetwork::in_links(int id) const {
    return in_links_[index_of(id)];
}

bool TmaNetwork::adjacent(int from, int to) const { return link_index(from, to) != npos; }

std::size_t TmaNetwork::link_index(int from, int to) const {
    if (!has_waypoint(from)) return npos;
    for (std::size_t li : out_links_[index_of(from)]) {
        if (links_[li].to == to) return li;
    }
    return npos;
}

std::vector<int> TmaNetwork::entry_ids() const {
    std::vector<int> out;
    for (const auto& w : waypoints_) {
        if (w.kind == WaypointKind::Entry) out.push_back(w.id);
    }
    return out;
}

std::vector<int> TmaNetwork::runway_ids() const {
    std::vector<int> out;
    for (const auto& w : waypoints_) {
        if (w.kind == WaypointKind::Runway) out.push_back(w.id);
    }
    return out;
}

double TmaNetwork::ideal_travel_time(int from) const {
    double t = ideal_to_runway_[index_of(from)];
    if (t == kInf) throw ValidationError("no runway reachable from waypoint " + std::to_string(from));
    return t;
}

double TmaNetwork::worst_travel_time(int from) const {
    double t = worst_to_runway_[index_of(from)];
    if (t == kInf) throw ValidationError("no runway reachable from waypoint " + std::to_string(from));
    return t;
}

bool TmaNetwork::runway_reachable(int from) const {
    return ideal_to_runway_[index_of(from)] != kInf;
}

void TmaNetwork::validate_and_index() {
    if (waypoints_.empty()) throw ValidationError("network has no waypoints");

    int max_id = 0;
    for (const auto& w : waypoints_) {
        if (w.id < 0) throw ValidationError("negative waypoint id " + std::to_string(w.id));
        max_id = std::max(max_id, w.id);
    }
    id_to_index_.assign(static_cast<std::size_t>(max_id) + 1, npos);
    for (std::size_t i = 0; i < waypoints_.size(); ++i) {
        const auto& w = waypoints_[i];
        if (id_to_index_[static_cast<std::size_t>(w.id)] != npos) {
            throw ValidationError("duplicate waypoint id " + std::to_string(w.id));
        }
        id_to_index_[static_cast<std::size_t>(w.id)] = i;
        if (w.kind == WaypointKind::Runway && w.holding_allowed) {
            throw ValidationError("runway waypoint " + std::to_string(w.id) +
                                  " must not allow holding");
        }
    }

    out_links_.assign(waypoints_.size(), {});
    in_links_.assign(waypoints_.size(), {});
    for (std::size_t li = 0; li < links_.size(); ++li) {
        const Link& l = links_[li];
        std::size_t fi = index_of(l.from);
        std::size_t ti = index_of(l.to);
        if (l.from == l.to) throw ValidationError("self-loop at waypoint " + std::to_string(l.from));
        if (!(l.distance_nm > 0.0)) {
            throw ValidationError("nonpositive distance on link " + std::to_string(l.from) + "->" +
                                  std::to_string(l.to));
        }
        if (l.paces_s_per_nm.empty()) {
            throw ValidationError("link " + std::to_string(l.from) + "->" + std::to_string(l.to) +
                                  " has no speed levels");
        }
        for (std::size_t s = 0; s < l.paces_s_per_nm.size(); ++s) {
            if (!(l.paces_s_per_nm[s] > 0.0)) {
                throw ValidationError("nonpositive pace on link " + std::to_string(l.from) + "->" +
                                      std::to_string(l.to));
            }
            if (s > 0 && !(l.paces_s_per_nm[s] > l.paces_s_per_nm[s - 1])) {
                throw ValidationError("pace list not strictly increasing on link " +
                                      std::to_string(l.from) + "->" + std::to_string(l.to));
            }
        }
        for (std::size_t other : out_links_[fi]) {
            if (links_[other].to == l.to) {
                throw ValidationError("duplicate link " + std::to_string(l.from) + "->" +
                                      std::to_string(l.to));
            }
        }
        if (waypoints_[fi].kind == WaypointKind::Runway) {
            throw ValidationError("runway waypoint " + std::to_string(l.from) +
                                  " has an outgoing link");
        }
        out_links_[fi].push_back(li);
        in_links_[ti].push_back(li);
    }

    // Stable link ordering: by destination id within a waypoint, by source id
    // for incoming lists. Keeps downstream iteration deterministic.
    for (auto& v : out_links_) {
        std::sort(v.begin(), v.end(),
                  [this](std::size_t a, std::size_t b) { return links_[a].to < links_[b].to; });
    }
    for (auto& v : in_links_) {
        std::sort(v.begin(), v.end(),
                  [this](std::size_t a, std::size_t b) { return links_[a].from < links_[b].from; });
    }

    // Kahn's algorithm with a sorted frontier: deterministic topological
    // order, and a cycle check.
    std::vector<int> indegree(waypoints_.size(), 0);
    for (const Link& l : links_) indegree[index_of(l.to)]++;
    std::vector<int> frontier;
    for (const auto& w : waypoints_) {
        if (indegree[index_of(w.id)] == 0) frontier.push_back(w.id);
    }
    std::sort(frontier.begin(), frontier.end());
    topo_order_.clear();
    while (!frontier.empty()) {
        int id = frontier.front();
        frontier.erase(frontier.begin());
        topo_order_.push_back(id);
        bool inserted = false;
        for (std::size_t li : out_links_[index_of(id)]) {
            int to = links_[li].to;
            if (--indegree[index_of(to)] == 0) {
                frontier.push_back(to);
                inserted = true;
            }
        }
        if (inserted) std::sort(frontier.begin(), frontier.end());
    }
    if (topo_order_.size() != waypoints_.size()) throw ValidationError("cycle in network graph");

    // Fastest/slowest time-to-runway by backward sweep over the topo order.
    ideal_to_runway_.assign(waypoints_.size(), kInf);
    worst_to_runway_.assign(waypoints_.size(), kInf);
    for (auto it = topo_order_.rbegin(); it != topo_order_.rend(); ++it) {
        std::size_t wi = index_of(*it);
        if (waypoints_[wi].kind == WaypointKind::Runway) {
            ideal_to_runway_[wi] = 0.0;
            worst_to_runway_[wi] = 0.0;
            continue;
        }
        for (std::size_t li : out_links_[wi]) {
            const Link& l = links_[li];
            std::size_t ti = index_of(l.to);
            if (ideal_to_runway_[ti] != kInf) {
                ideal_to_runway_[wi] =
                    std::min(ideal_to_runway_[wi], l.min_travel_time() + ideal_to_runway_[ti]);
                worst_to_runway_[wi] =
                    std::max(worst_to_runway_[wi] == kInf ? -kInf : worst_to_runway_[wi],
                             l.max_travel_time() + worst_to_runway_[ti]);
            }
        }
        if (worst_to_runway_[wi] == -kInf) worst_to_runway_[wi] = kInf;
    }

    for (const auto& w : waypoints_) {
        if (w.kind == WaypointKind::Entry && ideal_to_runway_[index_of(w.id)] == kInf) {
            throw ValidationError("entry waypoint " + std::to_string(w.id) +
                                  " cannot reach any runway");
        }
    }
    if (runway_ids().empty()) throw ValidationError("network has no runway waypoint");
}

TmaNetwork load_network(const std::string& source) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(source);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("network file: ") + e.what());
    }
    try {
        std::vector<double> default_paces;
        if (j.contains("default_paces_s_per_nm")) {
            default_paces = j.at("default_paces_s_per_nm").get<std::vector<double>>();
        }
        std::vector<Waypoint> wps;
        for (const auto& jw : j.at("waypoints")) {
            Waypoint w;
            w.id = jw.at("id").get<int>();
            w.name = jw.value("name", std::string{});
            w.x_nm = jw.value("x_nm", 0.0);
            w.y_nm = jw.value("y_nm", 0.0);
            w.kind = waypoint_kind_from_string(jw.at("kind").get<std::string>());
            w.holding_allowed = jw.value("holding_allowed", false);
            wps.push_back(std::move(w));
        }
        std::vector<Link> links;
        for (const auto& jl : j.at("links")) {
            Link l;
            l.from = jl.at("from").get<int>();
            l.to = jl.at("to").get<int>();
            l.distance_nm = jl.at("distance_nm").get<double>();
            if (jl.contains("paces_s_per_nm")) {
                l.paces_s_per_nm = jl.at("paces_s_per_nm").get<std::vector<double>>();
            } else {
                if (default_paces.empty()) {
                    throw ParseError("link " + std::to_string(l.from) + "->" + std::to_string(l.to) +
                                     " has no paces and no network default is declared");
                }
                l.paces_s_per_nm = default_paces;
            }
            links.push_back(std::move(l));
        }
        TmaNetwork net(std::move(wps), std::move(links));
        net.set_name(j.value("name", std::string{}));
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("network file: ") + e.what());
    }
}

TmaNetwork load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open network file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_network(ss.str());
}

} // namespace tma
