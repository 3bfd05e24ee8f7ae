#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "tma/audit.hpp"
#include "tma/solver.hpp"

// Exhaustive reference solver. Enumerates route combinations, speed-level
// combinations and per-waypoint passage permutations, evaluating each with a
// plain Bellman-Ford least-solution pass. Kept deliberately simple and
// separate from the branch-and-bound search it cross-checks.

namespace tma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct MiniEdge {
    int from, to;
    double w;
};

bool least_solution(int n, double t_max, const std::vector<MiniEdge>& edges,
                    std::vector<double>& dist) {
    dist.assign(static_cast<std::size_t>(n), 0.0);
    for (int round = 0;; ++round) {
        bool changed = false;
        for (const MiniEdge& e : edges) {
            double cand = dist[static_cast<std::size_t>(e.from)] + e.w;
            if (cand > dist[static_cast<std::size_t>(e.to)] + 1e-12) {
                dist[static_cast<std::size_t>(e.to)] = cand;
                changed = true;
            }
        }
        if (!changed) break;
        if (round > n + 1) return false; // positive cycle
    }
    if (dist[0] > 1e-9) return false;
    for (int v = 1; v < n; ++v) {
        if (dist[static_cast<std::size_t>(v)] > t_max + 1e-9) return false;
    }
    return true;
}

void enumerate_paths(const TmaNetwork& net, int from, std::vector<int>& path,
                     std::vector<std::vector<int>>& out) {
    if (net.waypoint(from).kind == WaypointKind::Runway) {
        out.push_back(path);
        return;
    }
    for (std::size_t li : net.out_links(from)) {
        const Link& l = net.link(li);
        if (!net.runway_reachable(l.to)) continue;
        path.push_back(l.to);
        enumerate_paths(net, l.to, path, out);
        path.pop_back();
    }
}

struct OracleState {
    const StructuredProblem& sp;
    const TmaNetwork& net;
    std::vector<std::vector<int>> routes; // current combo, per flight
    std::vector<int> var_base;
    int var_count = 0;

    std::vector<MiniEdge> edges; // base + speed + accumulated order edges

    // Per-waypoint permutation groups, topological order.
    struct Group {
        int wp;
        std::vector<std::pair<std::size_t, std::size_t>> members; // (flight, pos)
    };
    std::vector<Group> groups;
    // Chosen order per group: flight indices in passage order.
    std::vector<std::vector<std::size_t>> chosen;

    double best_j = kInf;
    StructuredSolution best;
    std::vector<std::vector<int>> best_levels_routes;
    bool found = false;

    std::vector<double> scratch;

    explicit OracleState(const StructuredProblem& p) : sp(p), net(*p.net) {}

    int ar(std::size_t fi, std::size_t pos) const {
        return var_base[fi] + 2 * static_cast<int>(pos) + 1;
    }
    int dp(std::size_t fi, std::size_t pos) const { return ar(fi, pos) + 1; }
};

} // namespace

std::optional<Schedule> brute_force_oracle(const StructuredProblem& sp) {
    if (sp.flights.size() > 4) throw ValidationError("oracle guard: more than 4 flights");
    if (sp.net->waypoints().size() > 12) throw ValidationError("oracle guard: more than 12 waypoints");
    for (const Link& l : sp.net->links()) {
        if (l.paces_s_per_nm.size() > 2) throw ValidationError("oracle guard: more than 2 speed levels");
    }
    if (sp.flights.empty()) return Schedule{};

    OracleState st(sp);
    const TmaNetwork& net = *sp.net;
    const std::size_t nf = sp.flights.size();

    // All candidate routes, lexicographic by successive waypoint ids.
    std::vector<std::vector<std::vector<int>>> all_routes(nf);
    for (std::size_t fi = 0; fi < nf; ++fi) {
        const ProblemFlight& pf = sp.flights[fi];
        if (pf.pinned_landing) {
            all_routes[fi] = {{pf.anchor.waypoint}};
        } else {
            std::vector<int> path{pf.anchor.waypoint};
            enumerate_paths(net, pf.anchor.waypoint, path, all_routes[fi]);
        }
        if (all_routes[fi].empty()) return std::nullopt;
    }

    std::vector<std::size_t> route_pick(nf, 0);
    std::vector<double> dist;

    auto separable = [&](std::size_t fi, std::size_t pos) {
        return pos > 0 || sp.flights[fi].anchor.in_tma;
    };

    // Topological rank per waypoint id for group ordering.
    std::vector<int> topo_rank;
    {
        int max_id = 0;
        for (const Waypoint& w : net.waypoints()) max_id = std::max(max_id, w.id);
        topo_rank.assign(static_cast<std::size_t>(max_id) + 1, 0);
        int r = 0;
        for (int id : net.topological_order()) topo_rank[static_cast<std::size_t>(id)] = r++;
    }

    while (true) {
        // ---- evaluate current route combination ----
        st.routes.clear();
        for (std::size_t fi = 0; fi < nf; ++fi) st.routes.push_back(all_routes[fi][route_pick[fi]]);

        st.var_base.assign(nf, 0);
        int acc = 1;
        for (std::size_t fi = 0; fi < nf; ++fi) {
            st.var_base[fi] = acc - 1; // ar() adds 1 for the root offset
            acc += 2 * static_cast<int>(st.routes[fi].size());
        }
        st.var_count = acc;

        // Base edges independent of speeds and orders.
        std::vector<MiniEdge> base;
        for (std::size_t fi = 0; fi < nf; ++fi) {
            const auto& r = st.routes[fi];
            const FlightAnchor& a = sp.flights[fi].anchor;
            base.push_back({0, st.ar(fi, 0), a.ready_time});
            base.push_back({st.ar(fi, 0), 0, -a.ready_time});
            for (std::size_t p = 0; p < r.size(); ++p) {
                double lo = p == 0 ? sp.flights[fi].anchor_hold_lo : sp.hold_lo(fi, r[p]);
                double hi = p == 0 ? sp.flights[fi].anchor_hold_hi : sp.hold_hi(fi, r[p]);
                base.push_back({st.ar(fi, p), st.dp(fi, p), lo});
                base.push_back({st.dp(fi, p), st.ar(fi, p), -hi});
            }
            for (const FrozenPassage& fz : sp.hp.frozen) {
                if (fz.flight_id == a.flight_id) continue;
                for (std::size_t p = 1; p < r.size(); ++p) {
                    if (r[p] != fz.waypoint) continue;
                    double g = sp.hp.separation.pair_gap(fz.wake, a.wake);
                    base.push_back({0, st.ar(fi, p), fz.arrival + g});
                    base.push_back({0, st.dp(fi, p), fz.departure + g});
                }
            }
        }

        // Waypoint permutation groups for this route combination.
        st.groups.clear();
        for (int wp_id : net.topological_order()) {
            OracleState::Group grp;
            grp.wp = wp_id;
            for (std::size_t fi = 0; fi < nf; ++fi) {
                const auto& r = st.routes[fi];
                for (std::size_t p = 0; p < r.size(); ++p) {
                    if (r[p] == wp_id && separable(fi, p)) grp.members.push_back({fi, p});
                }
            }
            if (grp.members.size() >= 2) st.groups.push_back(std::move(grp));
        }

        // Speed-level slots (links with a real choice).
        struct LevelSlot {
            std::size_t fi, pos, n_levels;
        };
        std::vector<LevelSlot> lslots;
        for (std::size_t fi = 0; fi < nf; ++fi) {
            const auto& r = st.routes[fi];
            for (std::size_t p = 0; p + 1 < r.size(); ++p) {
                const Link& l = net.link(net.link_index(r[p], r[p + 1]));
                if (l.paces_s_per_nm.size() > 1) lslots.push_back({fi, p, l.paces_s_per_nm.size()});
            }
        }
        std::vector<std::size_t> level_pick(lslots.size(), 0);

        while (true) {
            // ---- evaluate current speed combination ----
            st.edges = base;
            std::vector<std::vector<int>> levels(nf);
            for (std::size_t fi = 0; fi < nf; ++fi) {
                levels[fi].assign(st.routes[fi].size() > 0 ? st.routes[fi].size() - 1 : 0, 0);
            }
            for (std::size_t k = 0; k < lslots.size(); ++k) {
                levels[lslots[k].fi][lslots[k].pos] = static_cast<int>(level_pick[k]);
            }
            for (std::size_t fi = 0; fi < nf; ++fi) {
                const auto& r = st.routes[fi];
                for (std::size_t p = 0; p + 1 < r.size(); ++p) {
                    const Link& l = net.link(net.link_index(r[p], r[p + 1]));
                    double tt = l.travel_time(static_cast<std::size_t>(levels[fi][p]));
                    st.edges.push_back({st.dp(fi, p), st.ar(fi, p + 1), tt});
                    st.edges.push_back({st.ar(fi, p + 1), st.dp(fi, p), -tt});
                }
            }

            // ---- enumerate passage orders, group by group ----
            st.chosen.assign(st.groups.size(), {});
            // Recursive lambda over groups.
            auto perm_rec = [&](auto&& self, std::size_t gi) -> void {
                if (gi == st.groups.size()) {
                    if (!least_solution(st.var_count, sp.t_max, st.edges, dist)) return;
                    double j = 0.0;
                    for (std::size_t fi = 0; fi < nf; ++fi) {
                        j += dist[static_cast<std::size_t>(st.ar(fi, st.routes[fi].size() - 1))];
                    }
                    j /= static_cast<double>(nf);
                    if (j < st.best_j - 1e-9) {
                        st.best_j = j;
                        st.found = true;
                        st.best.flights.clear();
                        for (std::size_t fi = 0; fi < nf; ++fi) {
                            FlightChoice c;
                            c.route = st.routes[fi];
                            c.levels = levels[fi];
                            for (std::size_t p = 0; p < st.routes[fi].size(); ++p) {
                                c.arrival.push_back(
                                    dist[static_cast<std::size_t>(st.ar(fi, p))]);
                                c.departure.push_back(
                                    dist[static_cast<std::size_t>(st.dp(fi, p))]);
                            }
                            st.best.flights.push_back(std::move(c));
                        }
                    }
                    return;
                }
                const auto& grp = st.groups[gi];
                std::vector<std::size_t> order(grp.members.size());
                for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
                std::sort(order.begin(), order.end());
                do {
                    // Anti-overtake consistency: when a pair shares the link
                    // into this waypoint, its order here must match the order
                    // at the tail waypoint.
                    bool consistent = true;
                    for (std::size_t x = 0; x < order.size() && consistent; ++x) {
                        for (std::size_t y = x + 1; y < order.size() && consistent; ++y) {
                            auto [fx, px] = grp.members[order[x]];
                            auto [fy, py] = grp.members[order[y]];
                            if (px == 0 || py == 0) continue;
                            int tail_x = st.routes[fx][px - 1];
                            int tail_y = st.routes[fy][py - 1];
                            if (tail_x != tail_y) continue;
                            // Find the tail group and the pair's order there.
                            for (std::size_t gj = 0; gj < gi; ++gj) {
                                if (st.groups[gj].wp != tail_x) continue;
                                const auto& prev = st.chosen[gj];
                                int rank_x = -1, rank_y = -1;
                                for (std::size_t r2 = 0; r2 < prev.size(); ++r2) {
                                    auto [pf, pp] = st.groups[gj].members[prev[r2]];
                                    if (pf == fx && st.routes[fx][px - 1] == st.groups[gj].wp &&
                                        pp + 1 < st.routes[fx].size() &&
                                        static_cast<std::size_t>(px) == pp + 1) {
                                        rank_x = static_cast<int>(r2);
                                    }
                                    if (pf == fy && pp + 1 < st.routes[fy].size() &&
                                        static_cast<std::size_t>(py) == pp + 1) {
                                        rank_y = static_cast<int>(r2);
                                    }
                                }
                                if (rank_x >= 0 && rank_y >= 0 &&
                                    (rank_x < rank_y) != (x < y)) {
                                    consistent = false;
                                }
                                break;
                            }
                        }
                    }
                    if (!consistent) continue;

                    std::size_t mark = st.edges.size();
                    for (std::size_t x = 0; x < order.size(); ++x) {
                        for (std::size_t y = x + 1; y < order.size(); ++y) {
                            auto [fx, px] = grp.members[order[x]];
                            auto [fy, py] = grp.members[order[y]];
                            double g = sp.pair_gap(fx, fy);
                            st.edges.push_back({st.ar(fx, px), st.ar(fy, py), g});
                            st.edges.push_back({st.dp(fx, px), st.dp(fy, py), g});
                        }
                    }
                    st.chosen[gi] = order;
                    if (least_solution(st.var_count, sp.t_max, st.edges, dist)) {
                        self(self, gi + 1);
                    }
                    st.edges.resize(mark);
                } while (std::next_permutation(order.begin(), order.end()));
                st.chosen[gi].clear();
            };
            perm_rec(perm_rec, 0);

            // ---- next speed combination ----
            std::size_t k = 0;
            while (k < lslots.size()) {
                if (++level_pick[k] < lslots[k].n_levels) break;
                level_pick[k] = 0;
                ++k;
            }
            if (k == lslots.size()) break;
        }

        // ---- next route combination ----
        std::size_t fi = nf;
        while (fi > 0) {
            --fi;
            if (++route_pick[fi] < all_routes[fi].size()) break;
            route_pick[fi] = 0;
            if (fi == 0) {
                fi = nf; // signal done
                break;
            }
        }
        if (fi == nf) break;
    }

    if (!st.found) return std::nullopt;
    return decode(sp, st.best);
}

} // namespace tma
