#include "tma/audit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tma {

std::string to_string(ViolationFamily f) {
    switch (f) {
    case ViolationFamily::RouteContinuity: return "route_continuity";
    case ViolationFamily::TravelTime: return "travel_time";
    case ViolationFamily::Holding: return "holding";
    case ViolationFamily::WaypointSeparation: return "waypoint_separation";
    case ViolationFamily::LinkFcfs: return "link_fcfs";
    case ViolationFamily::FrozenSeparation: return "frozen_separation";
    case ViolationFamily::Objective: return "objective";
    }
    return "?";
}

namespace {

struct FlightView {
    const FlightAnchor* anchor = nullptr;
    const FlightSchedule* sched = nullptr;

    // Position of waypoint id in the route, or -1.
    int position_of(int wp) const {
        for (std::size_t p = 0; p < sched->route.size(); ++p) {
            if (sched->route[p] == wp) return static_cast<int>(p);
        }
        return -1;
    }
    // A position participates in separation checks unless it is a
    // boundary-data anchor.
    bool separable_at(int pos) const { return pos > 0 || anchor->in_tma; }
};

void add(std::vector<Violation>& out, ViolationFamily fam, double magnitude,
         const std::string& detail) {
    out.push_back(Violation{fam, detail, magnitude});
}

std::string fid(int flight, int wp) {
    return "flight " + std::to_string(flight) + " at waypoint " + std::to_string(wp);
}

} // namespace

std::vector<Violation> audit_schedule(const HorizonProblem& hp, const Schedule& schedule,
                                      double tol) {
    std::vector<Violation> out;
    const TmaNetwork& net = *hp.net;

    std::vector<FlightView> views;
    for (const FlightAnchor& a : hp.flights) {
        const FlightSchedule* fs = schedule.find(a.flight_id);
        if (!fs) {
            add(out, ViolationFamily::RouteContinuity, 0.0,
                "flight " + std::to_string(a.flight_id) + " missing from schedule");
            continue;
        }
        views.push_back(FlightView{&a, fs});
    }

    // Per-flight structure: route shape, travel equalities, holding bounds.
    for (const FlightView& v : views) {
        const FlightSchedule& s = *v.sched;
        const FlightAnchor& a = *v.anchor;
        std::size_t n = s.route.size();
        if (n == 0 || s.arrival.size() != n || s.departure.size() != n || s.holding.size() != n ||
            s.speed_level.size() + 1 != n) {
            add(out, ViolationFamily::RouteContinuity, 0.0,
                "flight " + std::to_string(a.flight_id) + " has inconsistent schedule arrays");
            continue;
        }
        if (s.route.front() != a.waypoint) {
            add(out, ViolationFamily::RouteContinuity, 0.0,
                "flight " + std::to_string(a.flight_id) + " route does not start at its anchor");
            continue;
        }
        if (net.waypoint(s.route.back()).kind != WaypointKind::Runway) {
            add(out, ViolationFamily::RouteContinuity, 0.0,
                "flight " + std::to_string(a.flight_id) + " route does not end at a runway");
        }
        if (std::abs(s.arrival.front() - a.ready_time) > tol) {
            add(out, ViolationFamily::RouteContinuity,
                std::abs(s.arrival.front() - a.ready_time),
                "flight " + std::to_string(a.flight_id) + " anchor arrival differs from DS");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            std::size_t li = net.link_index(s.route[p], s.route[p + 1]);
            if (li == TmaNetwork::npos) {
                add(out, ViolationFamily::RouteContinuity, 0.0,
                    "flight " + std::to_string(a.flight_id) + " uses missing link " +
                        std::to_string(s.route[p]) + "->" + std::to_string(s.route[p + 1]));
                continue;
            }
            const Link& l = net.link(li);
            int lvl = s.speed_level[p];
            if (lvl < 0 || static_cast<std::size_t>(lvl) >= l.paces_s_per_nm.size()) {
                add(out, ViolationFamily::TravelTime, 0.0,
                    "flight " + std::to_string(a.flight_id) + " picks invalid speed level");
                continue;
            }
            double res = s.arrival[p + 1] - s.departure[p] - l.travel_time(static_cast<std::size_t>(lvl));
            if (std::abs(res) > tol) {
                add(out, ViolationFamily::TravelTime, std::abs(res),
                    "flight " + std::to_string(a.flight_id) + " link " + std::to_string(s.route[p]) +
                        "->" + std::to_string(s.route[p + 1]) + " travel residual " +
                        std::to_string(res));
            }
        }
        for (std::size_t p = 0; p < n; ++p) {
            const Waypoint& w = net.waypoint(s.route[p]);
            double ht = s.holding[p];
            double res = s.departure[p] - s.arrival[p] - ht;
            if (std::abs(res) > tol) {
                add(out, ViolationFamily::Holding, std::abs(res),
                    fid(a.flight_id, w.id) + ": DP != AR + HT");
            }
            double lo = (p == 0) ? a.committed_holding : 0.0;
            double hi = w.holding_allowed ? std::max(lo, hp.max_holding) : lo;
            if (ht < lo - tol || ht > hi + tol) {
                add(out, ViolationFamily::Holding, std::max(lo - ht, ht - hi),
                    fid(a.flight_id, w.id) + ": holding " + std::to_string(ht) +
                        " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            }
        }
    }

    // Pairwise separation at shared waypoints and FCFS on shared links.
    for (std::size_t ia = 0; ia < views.size(); ++ia) {
        for (std::size_t ib = ia + 1; ib < views.size(); ++ib) {
            const FlightView& va = views[ia];
            const FlightView& vb = views[ib];
            double g = hp.separation.pair_gap(va.anchor->wake, vb.anchor->wake);
            for (std::size_t pa = 0; pa < va.sched->route.size(); ++pa) {
                int wp = va.sched->route[pa];
                int pb = vb.position_of(wp);
                if (pb < 0) continue;
                if (!va.separable_at(static_cast<int>(pa)) ||
                    !vb.separable_at(pb)) {
                    continue;
                }
                double ara = va.sched->arrival[pa], arb = vb.sched->arrival[static_cast<std::size_t>(pb)];
                double dpa = va.sched->departure[pa], dpb = vb.sched->departure[static_cast<std::size_t>(pb)];
                bool a_first_ok = (arb - ara >= g - tol) && (dpb - dpa >= g - tol);
                bool b_first_ok = (ara - arb >= g - tol) && (dpa - dpb >= g - tol);
                if (!a_first_ok && !b_first_ok) {
                    double miss = std::min(std::max(g - (arb - ara), g - (dpb - dpa)),
                                           std::max(g - (ara - arb), g - (dpa - dpb)));
                    add(out, ViolationFamily::WaypointSeparation, miss,
                        "flights " + std::to_string(va.anchor->flight_id) + "/" +
                            std::to_string(vb.anchor->flight_id) + " at waypoint " +
                            std::to_string(wp));
                }
            }
            // Shared links: departure order at the tail must match arrival
            // order at the head, separated by the gap.
            for (std::size_t pa = 0; pa + 1 < va.sched->route.size(); ++pa) {
                int from = va.sched->route[pa], to = va.sched->route[pa + 1];
                int pb = vb.position_of(from);
                if (pb < 0 || static_cast<std::size_t>(pb) + 1 >= vb.sched->route.size() ||
                    vb.sched->route[static_cast<std::size_t>(pb) + 1] != to) {
                    continue;
                }
                double dpa = va.sched->departure[pa];
                double dpb = vb.sched->departure[static_cast<std::size_t>(pb)];
                double ara = va.sched->arrival[pa + 1];
                double arb = vb.sched->arrival[static_cast<std::size_t>(pb) + 1];
                bool ok;
                if (dpa < dpb - tol) {
                    ok = arb - ara >= g - tol;
                } else if (dpb < dpa - tol) {
                    ok = ara - arb >= g - tol;
                } else {
                    ok = std::abs(ara - arb) >= g - tol;
                }
                if (!ok) {
                    add(out, ViolationFamily::LinkFcfs, g - std::abs(ara - arb),
                        "flights " + std::to_string(va.anchor->flight_id) + "/" +
                            std::to_string(vb.anchor->flight_id) + " on link " +
                            std::to_string(from) + "->" + std::to_string(to));
                }
            }
        }
    }

    // Clearance from frozen passages (always "frozen first"; records at a
    // flight's own anchor node are its own history or boundary data).
    for (const FlightView& v : views) {
        for (const FrozenPassage& fz : hp.frozen) {
            if (fz.flight_id == v.anchor->flight_id) continue;
            int p = v.position_of(fz.waypoint);
            // The anchor position is pinned history; only link-reached
            // positions are decisions that must clear frozen passages.
            if (p < 1) continue;
            double g = hp.separation.pair_gap(fz.wake, v.anchor->wake);
            double ar = v.sched->arrival[static_cast<std::size_t>(p)];
            double dp = v.sched->departure[static_cast<std::size_t>(p)];
            if (ar - fz.arrival < g - tol) {
                add(out, ViolationFamily::FrozenSeparation, g - (ar - fz.arrival),
                    fid(v.anchor->flight_id, fz.waypoint) + " arrives too close to frozen flight " +
                        std::to_string(fz.flight_id));
            }
            if (dp - fz.departure < g - tol) {
                add(out, ViolationFamily::FrozenSeparation, g - (dp - fz.departure),
                    fid(v.anchor->flight_id, fz.waypoint) + " departs too close to frozen flight " +
                        std::to_string(fz.flight_id));
            }
        }
    }

    // Objective definition.
    if (!views.empty()) {
        double sum = 0.0;
        for (const FlightView& v : views) sum += v.sched->landing_time();
        double j = sum / static_cast<double>(views.size());
        if (std::abs(j - schedule.objective) > tol) {
            add(out, ViolationFamily::Objective, std::abs(j - schedule.objective),
                "objective is not the mean landing time");
        }
    }

    return out;
}

std::string describe(const std::vector<Violation>& violations, std::size_t max_items) {
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size() && i < max_items; ++i) {
        if (i) os << "; ";
        os << to_string(violations[i].family) << ": " << violations[i].detail;
    }
    if (violations.size() > max_items) os << "; ... (" << violations.size() << " total)";
    return os.str();
}

} // namespace tma
