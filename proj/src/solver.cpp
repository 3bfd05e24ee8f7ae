#include "tma/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>

#include "tma/audit.hpp"

namespace tma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieEps = 1e-9;

using Clock = std::chrono::steady_clock;

struct TemporalEdge {
    int from;
    int to;
    double w; // t[to] - t[from] >= w
};

// Difference-constraint engine: variable 0 is the zero reference, the least
// solution is computed by longest-path relaxation, a positive cycle (or a
// raised reference) proves infeasibility.
class Temporal {
public:
    void reset(int var_count, double t_max) {
        n_ = var_count;
        t_max_ = t_max;
        edges_.clear();
        adj_.assign(static_cast<std::size_t>(n_), {});
        dist_.assign(static_cast<std::size_t>(n_), 0.0);
        count_.assign(static_cast<std::size_t>(n_), 0);
        in_queue_.assign(static_cast<std::size_t>(n_), 0);
    }

    int add_edge(int from, int to, double w) {
        edges_.push_back({from, to, w});
        adj_[static_cast<std::size_t>(from)].push_back(static_cast<int>(edges_.size()) - 1);
        return static_cast<int>(edges_.size()) - 1;
    }

    std::size_t edge_count() const { return edges_.size(); }

    void truncate_edges(std::size_t keep) {
        while (edges_.size() > keep) {
            adj_[static_cast<std::size_t>(edges_.back().from)].pop_back();
            edges_.pop_back();
        }
    }

    // Full solve from the all-zero start.
    bool solve_full() {
        std::fill(dist_.begin(), dist_.end(), 0.0);
        std::deque<int> q;
        for (int v = 0; v < n_; ++v) {
            q.push_back(v);
            in_queue_[static_cast<std::size_t>(v)] = 1;
        }
        return run(q);
    }

    // Continue from the current (valid lower) solution after appending edges.
    bool solve_incremental(std::size_t first_new_edge) {
        std::deque<int> q;
        for (std::size_t e = first_new_edge; e < edges_.size(); ++e) {
            int u = edges_[e].from;
            if (!in_queue_[static_cast<std::size_t>(u)]) {
                q.push_back(u);
                in_queue_[static_cast<std::size_t>(u)] = 1;
            }
        }
        return run(q);
    }

    double value(int v) const { return dist_[static_cast<std::size_t>(v)]; }
    const std::vector<double>& values() const { return dist_; }
    void restore(const std::vector<double>& snapshot) { dist_ = snapshot; }

private:
    bool run(std::deque<int>& q) {
        std::fill(count_.begin(), count_.end(), 0);
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            in_queue_[static_cast<std::size_t>(u)] = 0;
            double du = dist_[static_cast<std::size_t>(u)];
            for (int ei : adj_[static_cast<std::size_t>(u)]) {
                const TemporalEdge& e = edges_[static_cast<std::size_t>(ei)];
                double cand = du + e.w;
                if (cand > dist_[static_cast<std::size_t>(e.to)] + 1e-12) {
                    dist_[static_cast<std::size_t>(e.to)] = cand;
                    if (++count_[static_cast<std::size_t>(e.to)] > n_ + 1) return false;
                    if (!in_queue_[static_cast<std::size_t>(e.to)]) {
                        q.push_back(e.to);
                        in_queue_[static_cast<std::size_t>(e.to)] = 1;
                    }
                }
            }
        }
        if (dist_[0] > 1e-9) return false; // reference raised: contradictory pins
        for (int v = 1; v < n_; ++v) {
            if (dist_[static_cast<std::size_t>(v)] > t_max_ + 1e-9) return false;
        }
        return true;
    }

    int n_ = 0;
    double t_max_ = 0.0;
    std::vector<TemporalEdge> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<double> dist_;
    std::vector<int> count_;
    std::vector<char> in_queue_;
};

// A pairwise precedence decision point at one waypoint.
struct OrderSlot {
    int wp = 0;
    int fa = 0, fb = 0; // flight indices, fa < fb
    int pa = 0, pb = 0; // positions in the fixed routes
    double gap = 0.0;
    int next_slot = -1; // slot at the next waypoint when both take the same link
    int fixed = 0;      // 0 unfixed, +1 fa first, -1 fb first
};

struct Search {
    const StructuredProblem& sp;
    const TmaNetwork& net;
    SolveLimits limits;
    Clock::time_point t0;

    std::int64_t nodes = 0;
    bool aborted = false;
    double frontier_bound = kInf; // min lower bound among abandoned open nodes

    double best_j = kInf;
    bool have_incumbent = false;
    StructuredSolution best_solution;

    // Route phase state.
    struct RouteState {
        std::vector<int> route;
        double earliest; // ds + committed hold + fastest prefix travel
        bool complete = false;
    };
    std::vector<RouteState> routes;
    std::vector<std::size_t> extend_order; // flight indices by (ds, id)

    // Temporal phase state.
    Temporal temporal;
    std::vector<int> var_ar; // var index per (flight, position): flat offsets
    std::vector<std::size_t> var_base;
    std::vector<OrderSlot> slots;
    std::vector<std::vector<int>> level_fixed; // per flight,link: -1 interval, else level
    double min_pair_gap = kInf;

    explicit Search(const StructuredProblem& p, const SolveLimits& lim)
        : sp(p), net(*p.net), limits(lim), t0(Clock::now()) {
        routes.resize(sp.flights.size());
        for (std::size_t fi = 0; fi < sp.flights.size(); ++fi) {
            extend_order.push_back(fi);
        }
        std::sort(extend_order.begin(), extend_order.end(), [&](std::size_t a, std::size_t b) {
            double da = sp.flights[a].anchor.ready_time;
            double db = sp.flights[b].anchor.ready_time;
            if (da != db) return da < db;
            return sp.flights[a].anchor.flight_id < sp.flights[b].anchor.flight_id;
        });
        for (std::size_t ia = 0; ia < sp.flights.size(); ++ia) {
            for (std::size_t ib = ia + 1; ib < sp.flights.size(); ++ib) {
                min_pair_gap = std::min(min_pair_gap, sp.pair_gap(ia, ib));
            }
        }
    }

    bool limit_hit() {
        if (aborted) return true;
        if (nodes >= limits.node_limit) {
            aborted = true;
            return true;
        }
        if ((nodes & 0x3F) == 0) {
            double el = std::chrono::duration<double>(Clock::now() - t0).count();
            if (el > limits.time_limit_s) {
                aborted = true;
                return true;
            }
        }
        return false;
    }

    double ideal_to_runway(int wp) const { return net.ideal_travel_time(wp); }

    // Mean-landing lower bound from per-flight earliest landings, tightened
    // by chaining separation gaps at each runway among flights whose runway
    // is already decided.
    double route_phase_bound() const {
        std::vector<double> landing(routes.size());
        for (std::size_t fi = 0; fi < routes.size(); ++fi) {
            const RouteState& rs = routes[fi];
            landing[fi] = rs.earliest + (rs.complete ? 0.0 : ideal_to_runway(rs.route.back()));
        }
        return chained_mean(landing, true);
    }

    double chained_mean(std::vector<double> landing, bool route_known_only) const {
        // Group decided flights by runway, chain gaps within each group.
        std::vector<std::pair<int, double>> by_runway;
        for (std::size_t fi = 0; fi < routes.size(); ++fi) {
            bool decided = routes[fi].complete;
            if (route_known_only && !decided) continue;
            by_runway.push_back({routes[fi].route.back(), landing[fi]});
        }
        std::sort(by_runway.begin(), by_runway.end());
        double total = 0.0;
        std::size_t i = 0;
        double g = min_pair_gap == kInf ? 0.0 : min_pair_gap;
        std::vector<double> group;
        std::vector<char> chained(routes.size(), 0);
        while (i < by_runway.size()) {
            std::size_t j = i;
            group.clear();
            while (j < by_runway.size() && by_runway[j].first == by_runway[i].first) {
                group.push_back(by_runway[j].second);
                ++j;
            }
            std::sort(group.begin(), group.end());
            double prev = -kInf;
            for (double t : group) {
                double v = std::max(t, prev + g);
                total += v;
                prev = v;
            }
            i = j;
        }
        for (std::size_t fi = 0; fi < routes.size(); ++fi) {
            if (route_known_only && !routes[fi].complete) total += landing[fi];
        }
        return total / static_cast<double>(routes.size());
    }

    // ---- Route phase ----------------------------------------------------

    void search_routes(std::size_t order_pos) {
        while (order_pos < extend_order.size() && routes[extend_order[order_pos]].complete) {
            ++order_pos;
        }
        if (order_pos == extend_order.size()) {
            enter_temporal_phase();
            return;
        }
        std::size_t fi = extend_order[order_pos];
        RouteState& rs = routes[fi];
        int u = rs.route.back();

        struct Arc {
            std::size_t li;
            double key;
        };
        std::vector<Arc> arcs;
        for (std::size_t li : net.out_links(u)) {
            const Link& l = net.link(li);
            if (!net.runway_reachable(l.to)) continue;
            arcs.push_back({li, l.min_travel_time() + ideal_to_runway(l.to)});
        }
        std::sort(arcs.begin(), arcs.end(), [&](const Arc& a, const Arc& b) {
            if (a.key != b.key) return a.key < b.key;
            return net.link(a.li).to < net.link(b.li).to;
        });

        for (const Arc& arc : arcs) {
            if (limit_hit()) {
                frontier_bound = std::min(frontier_bound, route_phase_bound());
                return;
            }
            const Link& l = net.link(arc.li);
            rs.route.push_back(l.to);
            double saved = rs.earliest;
            rs.earliest += l.min_travel_time();
            rs.complete = net.waypoint(l.to).kind == WaypointKind::Runway;

            ++nodes;
            double lb = route_phase_bound();
            if (lb < best_j - kTieEps) {
                search_routes(order_pos);
            } else if (aborted) {
                frontier_bound = std::min(frontier_bound, lb);
            }

            rs.route.pop_back();
            rs.earliest = saved;
            rs.complete = false;
            if (aborted) {
                frontier_bound = std::min(frontier_bound, route_phase_bound());
                return;
            }
        }
    }

    // ---- Temporal phase ---------------------------------------------------

    int ar(std::size_t fi, std::size_t pos) const {
        return static_cast<int>(var_base[fi] + 2 * pos) + 1;
    }
    int dp(std::size_t fi, std::size_t pos) const { return ar(fi, pos) + 1; }

    void enter_temporal_phase() {
        const std::size_t nf = routes.size();
        var_base.assign(nf, 0);
        std::size_t acc = 0;
        for (std::size_t fi = 0; fi < nf; ++fi) {
            var_base[fi] = acc;
            acc += 2 * routes[fi].route.size();
        }
        temporal.reset(static_cast<int>(acc) + 1, sp.t_max);

        level_fixed.assign(nf, {});
        for (std::size_t fi = 0; fi < nf; ++fi) {
            const RouteState& rs = routes[fi];
            const FlightAnchor& a = sp.flights[fi].anchor;
            // Anchor arrival pinned at DS.
            temporal.add_edge(0, ar(fi, 0), a.ready_time);
            temporal.add_edge(ar(fi, 0), 0, -a.ready_time);
            level_fixed[fi].assign(rs.route.size() > 0 ? rs.route.size() - 1 : 0, -1);
            for (std::size_t p = 0; p < rs.route.size(); ++p) {
                double lo = sp.hold_lo(fi, rs.route[p]);
                double hi = sp.hold_hi(fi, rs.route[p]);
                if (p == 0) {
                    lo = sp.flights[fi].anchor_hold_lo;
                    hi = sp.flights[fi].anchor_hold_hi;
                }
                temporal.add_edge(ar(fi, p), dp(fi, p), lo);
                temporal.add_edge(dp(fi, p), ar(fi, p), -hi);
                if (p + 1 < rs.route.size()) {
                    std::size_t li = net.link_index(rs.route[p], rs.route[p + 1]);
                    const Link& l = net.link(li);
                    if (l.paces_s_per_nm.size() == 1) level_fixed[fi][p] = 0;
                    double tmin = l.min_travel_time();
                    double tmax = level_fixed[fi][p] == 0 ? tmin : l.max_travel_time();
                    temporal.add_edge(dp(fi, p), ar(fi, p + 1), tmin);
                    temporal.add_edge(ar(fi, p + 1), dp(fi, p), -tmax);
                }
            }
            // One-sided clearance behind frozen passages (not at the anchor).
            for (const FrozenPassage& fz : sp.hp.frozen) {
                if (fz.flight_id == a.flight_id) continue;
                for (std::size_t p = 1; p < rs.route.size(); ++p) {
                    if (rs.route[p] != fz.waypoint) continue;
                    double g = sp.hp.separation.pair_gap(fz.wake, a.wake);
                    temporal.add_edge(0, ar(fi, p), fz.arrival + g);
                    temporal.add_edge(0, dp(fi, p), fz.departure + g);
                }
            }
        }

        build_slots();

        if (!temporal.solve_full()) return;
        ++nodes;
        search_temporal();
    }

    bool separable(std::size_t fi, std::size_t pos) const {
        return pos > 0 || sp.flights[fi].anchor.in_tma;
    }

    void build_slots() {
        slots.clear();
        // Visits per waypoint id, ordered by waypoint then flight.
        struct Visit {
            std::size_t fi;
            std::size_t pos;
        };
        std::vector<int> wp_ids;
        for (const Waypoint& w : net.waypoints()) wp_ids.push_back(w.id);
        std::sort(wp_ids.begin(), wp_ids.end());
        for (int wp : wp_ids) {
            std::vector<Visit> vis;
            for (std::size_t fi = 0; fi < routes.size(); ++fi) {
                const auto& r = routes[fi].route;
                for (std::size_t p = 0; p < r.size(); ++p) {
                    if (r[p] == wp && separable(fi, p)) {
                        vis.push_back({fi, p});
                        break;
                    }
                }
            }
            for (std::size_t a = 0; a < vis.size(); ++a) {
                for (std::size_t b = a + 1; b < vis.size(); ++b) {
                    OrderSlot s;
                    s.wp = wp;
                    s.fa = static_cast<int>(vis[a].fi);
                    s.fb = static_cast<int>(vis[b].fi);
                    s.pa = static_cast<int>(vis[a].pos);
                    s.pb = static_cast<int>(vis[b].pos);
                    s.gap = sp.pair_gap(vis[a].fi, vis[b].fi);
                    slots.push_back(s);
                }
            }
        }
        // Link each slot to the pair's slot at the next waypoint when both
        // routes continue over the same link (the no-overtake coupling).
        auto find_slot = [&](int wp, int fa, int fb) {
            for (std::size_t i = 0; i < slots.size(); ++i) {
                if (slots[i].wp == wp && slots[i].fa == fa && slots[i].fb == fb) {
                    return static_cast<int>(i);
                }
            }
            return -1;
        };
        for (OrderSlot& s : slots) {
            const auto& ra = routes[static_cast<std::size_t>(s.fa)].route;
            const auto& rb = routes[static_cast<std::size_t>(s.fb)].route;
            if (static_cast<std::size_t>(s.pa) + 1 < ra.size() &&
                static_cast<std::size_t>(s.pb) + 1 < rb.size() &&
                ra[static_cast<std::size_t>(s.pa) + 1] == rb[static_cast<std::size_t>(s.pb) + 1]) {
                s.next_slot = find_slot(ra[static_cast<std::size_t>(s.pa) + 1], s.fa, s.fb);
            }
        }
    }

    // Applies a precedence (and its chain along shared links). Returns false
    // on conflict with an already-fixed slot.
    bool fix_slot(int si, int dir, std::vector<int>& journal) {
        OrderSlot& s = slots[static_cast<std::size_t>(si)];
        if (s.fixed == dir) return true;
        if (s.fixed == -dir) return false;
        s.fixed = dir;
        journal.push_back(si);
        std::size_t first = dir > 0 ? static_cast<std::size_t>(s.fa) : static_cast<std::size_t>(s.fb);
        std::size_t second = dir > 0 ? static_cast<std::size_t>(s.fb) : static_cast<std::size_t>(s.fa);
        std::size_t pf = dir > 0 ? static_cast<std::size_t>(s.pa) : static_cast<std::size_t>(s.pb);
        std::size_t ps = dir > 0 ? static_cast<std::size_t>(s.pb) : static_cast<std::size_t>(s.pa);
        temporal.add_edge(ar(first, pf), ar(second, ps), s.gap);
        temporal.add_edge(dp(first, pf), dp(second, ps), s.gap);
        if (s.next_slot >= 0) return fix_slot(s.next_slot, dir, journal);
        return true;
    }

    void unfix(std::vector<int>& journal) {
        for (int si : journal) slots[static_cast<std::size_t>(si)].fixed = 0;
        journal.clear();
    }

    // Gap shortfall of one direction of a slot under the current times;
    // zero means that direction is satisfied as-is.
    double dir_deficit(const OrderSlot& s, int dir) const {
        std::size_t first = dir > 0 ? static_cast<std::size_t>(s.fa) : static_cast<std::size_t>(s.fb);
        std::size_t second = dir > 0 ? static_cast<std::size_t>(s.fb) : static_cast<std::size_t>(s.fa);
        std::size_t pf = dir > 0 ? static_cast<std::size_t>(s.pa) : static_cast<std::size_t>(s.pb);
        std::size_t ps = dir > 0 ? static_cast<std::size_t>(s.pb) : static_cast<std::size_t>(s.pa);
        double d = 0.0;
        d = std::max(d, s.gap - (temporal.value(ar(second, ps)) - temporal.value(ar(first, pf))));
        d = std::max(d, s.gap - (temporal.value(dp(second, ps)) - temporal.value(dp(first, pf))));
        if (s.next_slot >= 0) {
            const OrderSlot& nx = slots[static_cast<std::size_t>(s.next_slot)];
            if (nx.fixed != 0 && nx.fixed != dir) return kInf;
            if (nx.fixed == 0) {
                std::size_t npf = dir > 0 ? static_cast<std::size_t>(nx.pa) : static_cast<std::size_t>(nx.pb);
                std::size_t nps = dir > 0 ? static_cast<std::size_t>(nx.pb) : static_cast<std::size_t>(nx.pa);
                std::size_t nfirst = dir > 0 ? static_cast<std::size_t>(nx.fa) : static_cast<std::size_t>(nx.fb);
                std::size_t nsecond = dir > 0 ? static_cast<std::size_t>(nx.fb) : static_cast<std::size_t>(nx.fa);
                d = std::max(d, nx.gap - (temporal.value(ar(nsecond, nps)) -
                                          temporal.value(ar(nfirst, npf))));
            }
        }
        return d;
    }

    double relaxed_objective() const {
        std::vector<double> landing(routes.size());
        for (std::size_t fi = 0; fi < routes.size(); ++fi) {
            landing[fi] = temporal.value(ar(fi, routes[fi].route.size() - 1));
        }
        return chained_mean(landing, false);
    }

    void search_temporal() {
        if (limit_hit()) {
            frontier_bound = std::min(frontier_bound, relaxed_objective());
            return;
        }
        double lb = relaxed_objective();
        if (lb >= best_j - kTieEps) return;

        // Most conflicted unfixed precedence.
        int pick = -1;
        double pick_score = 1e-9;
        int pick_pref = +1;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            const OrderSlot& s = slots[i];
            if (s.fixed != 0) continue;
            double da = dir_deficit(s, +1);
            double db = dir_deficit(s, -1);
            if (da <= 1e-9 || db <= 1e-9) continue;
            double score = std::min(da, db);
            if (score > pick_score) {
                pick_score = score;
                pick = static_cast<int>(i);
                pick_pref = da <= db ? +1 : -1;
            }
        }
        if (pick >= 0) {
            branch_slot(pick, pick_pref);
            return;
        }

        // All precedences resolvable; snap interval speeds to levels.
        int sfi = -1, spos = -1;
        double worst = 1e-9;
        for (std::size_t fi = 0; fi < routes.size(); ++fi) {
            const auto& r = routes[fi].route;
            for (std::size_t p = 0; p + 1 < r.size(); ++p) {
                if (level_fixed[fi][p] >= 0) continue;
                std::size_t li = net.link_index(r[p], r[p + 1]);
                const Link& l = net.link(li);
                double real = temporal.value(ar(fi, p + 1)) - temporal.value(dp(fi, p));
                double best_m = kInf;
                int best_s = 0;
                for (std::size_t s = 0; s < l.paces_s_per_nm.size(); ++s) {
                    double m = std::abs(real - l.travel_time(s));
                    if (m < best_m) {
                        best_m = m;
                        best_s = static_cast<int>(s);
                    }
                }
                (void)best_s;
                if (best_m > worst) {
                    worst = best_m;
                    sfi = static_cast<int>(fi);
                    spos = static_cast<int>(p);
                }
            }
        }
        if (sfi >= 0) {
            branch_speed(static_cast<std::size_t>(sfi), static_cast<std::size_t>(spos));
            return;
        }

        accept_leaf();
    }

    void branch_slot(int si, int preferred) {
        for (int attempt = 0; attempt < 2; ++attempt) {
            int dir = attempt == 0 ? preferred : -preferred;
            std::vector<int> journal;
            std::size_t edge_mark = temporal.edge_count();
            std::vector<double> snapshot = temporal.values();
            bool ok = fix_slot(si, dir, journal);
            if (ok) {
                ++nodes;
                if (temporal.solve_incremental(edge_mark)) search_temporal();
            }
            unfix(journal);
            temporal.truncate_edges(edge_mark);
            temporal.restore(snapshot);
            if (aborted) {
                frontier_bound = std::min(frontier_bound, relaxed_objective());
                return;
            }
        }
    }

    void branch_speed(std::size_t fi, std::size_t pos) {
        const auto& r = routes[fi].route;
        std::size_t li = net.link_index(r[pos], r[pos + 1]);
        const Link& l = net.link(li);
        for (std::size_t s = 0; s < l.paces_s_per_nm.size(); ++s) {
            std::size_t edge_mark = temporal.edge_count();
            std::vector<double> snapshot = temporal.values();
            double tt = l.travel_time(s);
            temporal.add_edge(dp(fi, pos), ar(fi, pos + 1), tt);
            temporal.add_edge(ar(fi, pos + 1), dp(fi, pos), -tt);
            level_fixed[fi][pos] = static_cast<int>(s);
            ++nodes;
            if (temporal.solve_incremental(edge_mark)) search_temporal();
            level_fixed[fi][pos] = -1;
            temporal.truncate_edges(edge_mark);
            temporal.restore(snapshot);
            if (aborted) {
                frontier_bound = std::min(frontier_bound, relaxed_objective());
                return;
            }
        }
    }

    void accept_leaf() {
        double j = 0.0;
        for (std::size_t fi = 0; fi < routes.size(); ++fi) {
            j += temporal.value(ar(fi, routes[fi].route.size() - 1));
        }
        j /= static_cast<double>(routes.size());
        if (j >= best_j - kTieEps) return;

        StructuredSolution sol;
        for (std::size_t fi = 0; fi < routes.size(); ++fi) {
            const auto& r = routes[fi].route;
            FlightChoice c;
            c.route = r;
            for (std::size_t p = 0; p < r.size(); ++p) {
                c.arrival.push_back(temporal.value(ar(fi, p)));
                c.departure.push_back(temporal.value(dp(fi, p)));
            }
            for (std::size_t p = 0; p + 1 < r.size(); ++p) {
                int lvl = level_fixed[fi][p];
                if (lvl < 0) {
                    std::size_t li = net.link_index(r[p], r[p + 1]);
                    const Link& l = net.link(li);
                    double real = c.arrival[p + 1] - c.departure[p];
                    double best_m = kInf;
                    for (std::size_t s = 0; s < l.paces_s_per_nm.size(); ++s) {
                        double m = std::abs(real - l.travel_time(s));
                        if (m < best_m) {
                            best_m = m;
                            lvl = static_cast<int>(s);
                        }
                    }
                }
                c.levels.push_back(lvl);
            }
            sol.flights.push_back(std::move(c));
        }
        best_solution = std::move(sol);
        best_j = j;
        have_incumbent = true;
    }
};

} // namespace

std::string to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Timeout: return "timeout";
    }
    return "?";
}

std::string SolveReport::csv_row() const {
    char buf[160];
    if (std::isnan(incumbent)) {
        std::snprintf(buf, sizeof(buf), "%s,,%.6f,%lld", to_string(status).c_str(), wall_time_s,
                      static_cast<long long>(nodes_explored));
    } else {
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%lld", to_string(status).c_str(), incumbent,
                      wall_time_s, static_cast<long long>(nodes_explored));
    }
    return buf;
}

SolveResult solve(const StructuredProblem& sp, const SolveLimits& limits,
                  const Schedule* warm_start) {
    auto t0 = Clock::now();
    SolveResult out;

    if (sp.flights.empty()) {
        out.schedule = Schedule{};
        out.report.status = SolveStatus::Optimal;
        out.report.best_bound = 0.0;
        out.report.incumbent = 0.0;
        out.report.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
        return out;
    }

    Search search(sp, limits);

    Schedule warm_copy;
    bool warm_ok = false;
    if (warm_start && warm_start->flights.size() == sp.flights.size()) {
        bool covers = true;
        for (const ProblemFlight& pf : sp.flights) {
            if (!warm_start->find(pf.anchor.flight_id)) covers = false;
        }
        if (covers) {
            warm_copy = *warm_start;
            double sum = 0.0;
            for (const auto& fs : warm_copy.flights) sum += fs.landing_time();
            warm_copy.objective = sum / static_cast<double>(warm_copy.flights.size());
            if (audit_schedule(sp.hp, warm_copy, 1e-6).empty()) {
                search.best_j = warm_copy.objective;
                warm_ok = true;
            }
        }
    }

    // earliest tracks time-at-route-end during the route phase.
    for (std::size_t fi = 0; fi < sp.flights.size(); ++fi) {
        const ProblemFlight& pf = sp.flights[fi];
        search.routes[fi].route = {pf.anchor.waypoint};
        search.routes[fi].earliest = pf.anchor.ready_time + pf.anchor_hold_lo;
        search.routes[fi].complete = pf.pinned_landing;
    }

    search.search_routes(0);

    SolveReport& rep = out.report;
    rep.nodes_explored = search.nodes;
    rep.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();

    if (search.have_incumbent) {
        out.schedule = decode(sp, search.best_solution);
        rep.incumbent = out.schedule->objective;
    } else if (warm_ok) {
        out.schedule = warm_copy;
        rep.incumbent = warm_copy.objective;
    }

    if (search.aborted) {
        rep.status = SolveStatus::Timeout;
        rep.best_bound = std::min(search.frontier_bound, out.schedule ? rep.incumbent : kInf);
    } else if (out.schedule) {
        rep.status = SolveStatus::Optimal;
        rep.best_bound = rep.incumbent;
    } else {
        rep.status = SolveStatus::Infeasible;
        rep.best_bound = kInf;
    }
    return out;
}

} // namespace tma
