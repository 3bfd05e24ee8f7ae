#include "tma/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <unordered_map>

namespace tma {

namespace {

constexpr double kTol = 1e-9;

struct CommittedStop {
    int waypoint;
    double arrival;
    double departure;
    bool separable;
    int next_waypoint; // -1 at route end
    double gap(double other) const;
};

struct CommittedFlight {
    int flight_id;
    WakeCategory wake;
    std::vector<CommittedStop> stops;
};

struct SearchState {
    int node;
    double t; // arrival time at node
    int parent;
    double hold;
    int level;
    std::size_t link;
};

bool pair_clear(double ar_a, double dp_a, double ar_b, double dp_b, double g) {
    bool a_first = (ar_b - ar_a >= g - kTol) && (dp_b - dp_a >= g - kTol);
    bool b_first = (ar_a - ar_b >= g - kTol) && (dp_a - dp_b >= g - kTol);
    return a_first || b_first;
}

} // namespace

PriorityPlanResult solve_priority(const StructuredProblem& sp) {
    auto t0 = std::chrono::steady_clock::now();
    PriorityPlanResult out;
    const TmaNetwork& net = *sp.net;

    std::vector<CommittedFlight> committed;
    for (const FrozenPassage& fz : sp.hp.frozen) {
        CommittedFlight cf;
        cf.flight_id = fz.flight_id;
        cf.wake = fz.wake;
        cf.stops.push_back({fz.waypoint, fz.arrival, fz.departure, true, fz.departed_to});
        committed.push_back(std::move(cf));
    }

    // Priority: ideal landing time, ties by flight id. Pinned flights are
    // facts and commit first.
    std::vector<std::size_t> order;
    for (std::size_t fi = 0; fi < sp.flights.size(); ++fi) order.push_back(fi);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const ProblemFlight& pa = sp.flights[a];
        const ProblemFlight& pb = sp.flights[b];
        if (pa.pinned_landing != pb.pinned_landing) return pa.pinned_landing;
        double ia = pa.anchor.ready_time + pa.anchor_hold_lo + net.ideal_travel_time(pa.anchor.waypoint);
        double ib = pb.anchor.ready_time + pb.anchor_hold_lo + net.ideal_travel_time(pb.anchor.waypoint);
        if (ia != ib) return ia < ib;
        return pa.anchor.flight_id < pb.anchor.flight_id;
    });

    double landing_sum = 0.0;
    std::size_t landed_n = 0;

    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const ProblemFlight& pf = sp.flights[order[oi]];
        const FlightAnchor& anchor = pf.anchor;

        if (pf.pinned_landing) {
            FlightSchedule fs;
            fs.flight_id = anchor.flight_id;
            fs.route = {anchor.waypoint};
            fs.arrival = {anchor.ready_time};
            fs.departure = {anchor.ready_time};
            fs.holding = {0.0};
            out.schedule.flights.push_back(fs);
            CommittedFlight cf;
            cf.flight_id = anchor.flight_id;
            cf.wake = anchor.wake;
            cf.stops.push_back({anchor.waypoint, anchor.ready_time, anchor.ready_time, true, -1});
            committed.push_back(std::move(cf));
            landing_sum += anchor.ready_time;
            ++landed_n;
            continue;
        }

        // Separation screens against everything committed so far.
        auto stop_clear = [&](int wp, double ar, double dp, bool separable) {
            if (!separable) return true;
            double g_self; // computed per opponent below
            (void)g_self;
            for (const CommittedFlight& cf : committed) {
                double g = sp.hp.separation.pair_gap(cf.wake, anchor.wake);
                for (const CommittedStop& st : cf.stops) {
                    if (st.waypoint != wp || !st.separable) continue;
                    if (!pair_clear(st.arrival, st.departure, ar, dp, g)) return false;
                }
            }
            return true;
        };
        auto link_clear = [&](int from, int to, double dp_from, double ar_to) {
            for (const CommittedFlight& cf : committed) {
                double g = sp.hp.separation.pair_gap(cf.wake, anchor.wake);
                for (const CommittedStop& st : cf.stops) {
                    if (st.waypoint != from || st.next_waypoint != to) continue;
                    // Same link: departure order must match arrival order
                    // with the gap at the head.
                    const CommittedStop* head = nullptr;
                    for (const CommittedStop& st2 : cf.stops) {
                        if (st2.waypoint == to) head = &st2;
                    }
                    if (!head) continue;
                    if (dp_from > st.departure + kTol) {
                        if (ar_to - head->arrival < g - kTol) return false;
                    } else if (dp_from < st.departure - kTol) {
                        if (head->arrival - ar_to < g - kTol) return false;
                    } else {
                        if (std::abs(ar_to - head->arrival) < g - kTol) return false;
                    }
                }
            }
            return true;
        };

        std::vector<SearchState> states;
        using QItem = std::tuple<double, int, std::size_t>; // (t, node, state idx)
        std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> pq;
        std::unordered_map<std::int64_t, double> best_bucket;
        auto bucket_key = [](int node, double t) {
            return (static_cast<std::int64_t>(node) << 32) |
                   static_cast<std::int64_t>(std::floor(t));
        };

        states.push_back({anchor.waypoint, anchor.ready_time, -1, 0.0, 0, 0});
        pq.push({anchor.ready_time, anchor.waypoint, 0});
        best_bucket[bucket_key(anchor.waypoint, anchor.ready_time)] = anchor.ready_time;

        int goal_state = -1;
        while (!pq.empty()) {
            auto [t, node, si] = pq.top();
            pq.pop();
            if (t > states[si].t + kTol) continue; // stale
            if (net.waypoint(node).kind == WaypointKind::Runway) {
                goal_state = static_cast<int>(si);
                break;
            }
            bool at_anchor = states[si].parent < 0;
            bool separable_here = !at_anchor || anchor.in_tma;
            double hold_lo = at_anchor ? pf.anchor_hold_lo : 0.0;
            double hold_hi = at_anchor ? pf.anchor_hold_hi : sp.hold_hi(order[oi], node);
            for (double h = hold_lo; h <= hold_hi + kTol; h += 10.0) {
                double dp_v = t + h;
                if (!stop_clear(node, t, dp_v, separable_here)) continue;
                for (std::size_t li : net.out_links(node)) {
                    const Link& l = net.link(li);
                    if (!net.runway_reachable(l.to)) continue;
                    for (std::size_t lvl = 0; lvl < l.paces_s_per_nm.size(); ++lvl) {
                        double ar_w = dp_v + l.travel_time(lvl);
                        if (ar_w > sp.t_max + kTol) continue;
                        if (!link_clear(node, l.to, dp_v, ar_w)) continue;
                        if (net.waypoint(l.to).kind == WaypointKind::Runway &&
                            !stop_clear(l.to, ar_w, ar_w, true)) {
                            continue;
                        }
                        auto key = bucket_key(l.to, ar_w);
                        auto it = best_bucket.find(key);
                        if (it != best_bucket.end() && it->second <= ar_w + kTol) continue;
                        best_bucket[key] = ar_w;
                        states.push_back({l.to, ar_w, static_cast<int>(si), h,
                                          static_cast<int>(lvl), li});
                        pq.push({ar_w, l.to, states.size() - 1});
                    }
                }
                if (hold_hi <= hold_lo) break;
            }
        }

        if (goal_state < 0) {
            out.infeasible_flights.push_back(anchor.flight_id);
            continue;
        }

        // Reconstruct and commit.
        std::vector<const SearchState*> chain;
        for (int si = goal_state; si >= 0; si = states[static_cast<std::size_t>(si)].parent) {
            chain.push_back(&states[static_cast<std::size_t>(si)]);
        }
        std::reverse(chain.begin(), chain.end());
        FlightSchedule fs;
        fs.flight_id = anchor.flight_id;
        CommittedFlight cf;
        cf.flight_id = anchor.flight_id;
        cf.wake = anchor.wake;
        for (std::size_t k = 0; k < chain.size(); ++k) {
            fs.route.push_back(chain[k]->node);
            fs.arrival.push_back(chain[k]->t);
            double hold = k + 1 < chain.size() ? chain[k + 1]->hold : 0.0;
            fs.departure.push_back(chain[k]->t + hold);
            fs.holding.push_back(hold);
            if (k + 1 < chain.size()) fs.speed_level.push_back(chain[k + 1]->level);
            bool separable = k > 0 || anchor.in_tma;
            int next_wp = k + 1 < chain.size() ? chain[k + 1]->node : -1;
            cf.stops.push_back({chain[k]->node, fs.arrival[k], fs.departure[k], separable, next_wp});
        }
        committed.push_back(std::move(cf));
        landing_sum += fs.landing_time();
        ++landed_n;
        out.schedule.flights.push_back(std::move(fs));
    }

    std::sort(out.schedule.flights.begin(), out.schedule.flights.end(),
              [](const FlightSchedule& a, const FlightSchedule& b) {
                  return a.flight_id < b.flight_id;
              });
    out.schedule.objective = landed_n ? landing_sum / static_cast<double>(landed_n) : 0.0;
    std::sort(out.infeasible_flights.begin(), out.infeasible_flights.end());
    out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

} // namespace tma
