#include "tma/milp_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tma/audit.hpp"

namespace tma {

namespace {

double longest_slowest_path(const TmaNetwork& net) {
    double worst = 0.0;
    for (const Waypoint& w : net.waypoints()) {
        if (net.runway_reachable(w.id)) worst = std::max(worst, net.worst_travel_time(w.id));
    }
    return worst;
}

struct BigMContext {
    double t_max = 0.0;
    double max_gap = 0.0;
};

BigMContext big_m_context(const HorizonProblem& hp) {
    BigMContext ctx;
    if (hp.flights.empty()) return ctx;
    double max_ds = 0.0;
    for (const FlightAnchor& a : hp.flights) max_ds = std::max(max_ds, a.ready_time);
    double gap = 0.0;
    if (hp.flights.size() > 1 || !hp.frozen.empty()) {
        gap = hp.separation.max_gap();
    }
    ctx.max_gap = gap;
    ctx.t_max = max_ds + longest_slowest_path(*hp.net) +
                static_cast<double>(hp.flights.size()) * (hp.max_holding + gap);
    return ctx;
}

std::vector<BigMEntry> build_registry(const BigMContext& ctx, bool empty) {
    if (empty) return {};
    std::vector<BigMEntry> reg;
    reg.push_back({"travel", ctx.t_max,
                   "horizon end bound: max DS + slowest longest path + |F|*(M_h + max gap)"});
    reg.push_back({"separation", ctx.t_max + ctx.max_gap,
                   "horizon bound plus one gap so the inactive disjunct always has slack"});
    reg.push_back({"rear_end", ctx.t_max + ctx.max_gap,
                   "same bound as the separation disjunctions"});
    reg.push_back({"frozen", ctx.t_max, "one-sided rows against past passages"});
    reg.push_back({"runway_guard", ctx.t_max, "zeroes runway arrival variables on unused runways"});
    return reg;
}

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

std::vector<BigMEntry> big_m_values(const HorizonProblem& hp) {
    hp.validate();
    return build_registry(big_m_context(hp), hp.flights.empty());
}

EncodeResult encode(const HorizonProblem& hp_in) {
    hp_in.validate();
    EncodeResult out;
    StructuredProblem& sp = out.structured;
    MilpInstance& mi = out.milp;

    sp.net = hp_in.net;
    sp.hp = hp_in;
    std::sort(sp.hp.frozen.begin(), sp.hp.frozen.end(),
              [](const FrozenPassage& a, const FrozenPassage& b) {
                  if (a.flight_id != b.flight_id) return a.flight_id < b.flight_id;
                  if (a.waypoint != b.waypoint) return a.waypoint < b.waypoint;
                  return a.arrival < b.arrival;
              });
    const HorizonProblem& hp = sp.hp;
    const TmaNetwork& net = *hp.net;

    BigMContext ctx = big_m_context(hp);
    sp.t_max = ctx.t_max;
    sp.big_m = build_registry(ctx, hp.flights.empty());
    mi.big_m = sp.big_m;
    mi.name = "tma_arrivals";

    const double m_travel = ctx.t_max;
    const double m_disj = ctx.t_max + ctx.max_gap;
    const double m_frozen = ctx.t_max;
    const double t_guard = ctx.t_max;

    const std::size_t nf = hp.flights.size();
    if (nf == 0) return out; // trivial instance, objective 0

    // Structured per-flight data.
    for (const FlightAnchor& a : hp.flights) {
        ProblemFlight pf;
        pf.anchor = a;
        pf.pinned_landing = net.waypoint(a.waypoint).kind == WaypointKind::Runway;
        pf.anchor_hold_lo = a.committed_holding;
        bool can_hold = net.waypoint(a.waypoint).holding_allowed;
        pf.anchor_hold_hi =
            pf.pinned_landing ? 0.0
                              : std::max(a.committed_holding, can_hold ? hp.max_holding : 0.0);
        if (!pf.pinned_landing) {
            // Links whose tail is reachable from the anchor and whose head
            // still reaches a runway.
            std::vector<int> stack{a.waypoint};
            std::vector<char> seen;
            int max_id = 0;
            for (const Waypoint& w : net.waypoints()) max_id = std::max(max_id, w.id);
            seen.assign(static_cast<std::size_t>(max_id) + 1, 0);
            seen[static_cast<std::size_t>(a.waypoint)] = 1;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (std::size_t li : net.out_links(u)) {
                    const Link& l = net.link(li);
                    if (!net.runway_reachable(l.to)) continue;
                    pf.usable_links.push_back(li);
                    if (!seen[static_cast<std::size_t>(l.to)]) {
                        seen[static_cast<std::size_t>(l.to)] = 1;
                        stack.push_back(l.to);
                    }
                }
            }
            std::sort(pf.usable_links.begin(), pf.usable_links.end());
        }
        sp.flights.push_back(std::move(pf));
    }

    // ---- Flat variable table -------------------------------------------
    const auto& links = net.links();
    const auto& wps = net.waypoints();
    const std::size_t nl = links.size();
    const std::size_t nw = wps.size();

    std::vector<std::size_t> level_offset(nl + 1, 0);
    for (std::size_t li = 0; li < nl; ++li) {
        level_offset[li + 1] = level_offset[li] + links[li].paces_s_per_nm.size();
    }
    const std::size_t nlevels = level_offset[nl];

    // Per flight: x per link, delta per (link,level), AR/DP/HT per waypoint.
    const std::size_t per_flight = nl + nlevels + 3 * nw;
    auto x_idx = [&](std::size_t fi, std::size_t li) { return fi * per_flight + li; };
    auto d_idx = [&](std::size_t fi, std::size_t li, std::size_t s) {
        return fi * per_flight + nl + level_offset[li] + s;
    };
    auto ar_idx = [&](std::size_t fi, std::size_t wi) {
        return fi * per_flight + nl + nlevels + 3 * wi;
    };
    auto dp_idx = [&](std::size_t fi, std::size_t wi) { return ar_idx(fi, wi) + 1; };
    auto ht_idx = [&](std::size_t fi, std::size_t wi) { return ar_idx(fi, wi) + 2; };

    std::vector<std::size_t> wp_pos(static_cast<std::size_t>(0));
    {
        int max_id = 0;
        for (const Waypoint& w : wps) max_id = std::max(max_id, w.id);
        wp_pos.assign(static_cast<std::size_t>(max_id) + 1, 0);
        for (std::size_t wi = 0; wi < nw; ++wi) wp_pos[static_cast<std::size_t>(wps[wi].id)] = wi;
    }

    for (std::size_t fi = 0; fi < nf; ++fi) {
        const ProblemFlight& pf = sp.flights[fi];
        const std::string f = "f" + std::to_string(pf.anchor.flight_id);
        for (std::size_t li = 0; li < nl; ++li) {
            mi.vars.push_back({"x_" + f + "_" + std::to_string(links[li].from) + "_" +
                                   std::to_string(links[li].to),
                               true, 0.0, pf.pinned_landing ? 0.0 : 1.0});
        }
        for (std::size_t li = 0; li < nl; ++li) {
            for (std::size_t s = 0; s < links[li].paces_s_per_nm.size(); ++s) {
                mi.vars.push_back({"v_" + f + "_" + std::to_string(links[li].from) + "_" +
                                       std::to_string(links[li].to) + "_s" + std::to_string(s),
                                   true, 0.0, pf.pinned_landing ? 0.0 : 1.0});
            }
        }
        for (std::size_t wi = 0; wi < nw; ++wi) {
            const Waypoint& w = wps[wi];
            bool is_anchor = w.id == pf.anchor.waypoint;
            double ar_lo = is_anchor ? pf.anchor.ready_time : 0.0;
            double ar_hi = is_anchor ? pf.anchor.ready_time : ctx.t_max;
            double ht_lo = is_anchor ? pf.anchor_hold_lo : 0.0;
            double ht_hi = is_anchor ? pf.anchor_hold_hi
                                     : (w.holding_allowed ? hp.max_holding : 0.0);
            mi.vars.push_back({"ar_" + f + "_w" + std::to_string(w.id), false, ar_lo, ar_hi});
            mi.vars.push_back({"dp_" + f + "_w" + std::to_string(w.id), false, 0.0, ctx.t_max});
            mi.vars.push_back({"ht_" + f + "_w" + std::to_string(w.id), false, ht_lo, ht_hi});
        }
    }
    // Order binaries: o = 1 means the lower-id flight precedes at that node.
    const std::size_t order_base = mi.vars.size();
    std::vector<std::size_t> pair_offset;
    pair_offset.reserve(nf * nf);
    {
        std::size_t k = 0;
        pair_offset.assign(nf * nf, 0);
        for (std::size_t ia = 0; ia < nf; ++ia) {
            for (std::size_t ib = ia + 1; ib < nf; ++ib) {
                pair_offset[ia * nf + ib] = k;
                for (std::size_t wi = 0; wi < nw; ++wi) {
                    mi.vars.push_back(
                        {"o_w" + std::to_string(wps[wi].id) + "_f" +
                             std::to_string(sp.flights[ia].anchor.flight_id) + "_f" +
                             std::to_string(sp.flights[ib].anchor.flight_id),
                         true, 0.0, 1.0});
                }
                k += nw;
            }
        }
    }
    auto o_idx = [&](std::size_t ia, std::size_t ib, std::size_t wi) {
        return order_base + pair_offset[ia * nf + ib] * 1 + wi;
    };

    // VIS terms: how flight fi's presence at waypoint wi enters a row.
    // Returns false when the presence is impossible or boundary data (row
    // should be skipped), true otherwise; appends -coeff*x terms and bumps
    // the rhs for constant presence.
    auto append_absence_slack = [&](MilpRow& row, std::size_t fi, std::size_t wi, double m) {
        const ProblemFlight& pf = sp.flights[fi];
        const Waypoint& w = wps[wi];
        if (w.id == pf.anchor.waypoint) {
            if (!pf.anchor.in_tma) return false; // boundary data: constraint not applicable
            return true;                          // constant presence, no slack
        }
        if (pf.pinned_landing) return false; // never reaches other waypoints
        bool any = false;
        for (std::size_t li : net.in_links(w.id)) {
            row.terms.push_back({x_idx(fi, li), -m});
            any = true;
        }
        if (any) row.rhs -= m;
        return any; // no incoming links at all: flight can never be there
    };

    // ---- Rows -----------------------------------------------------------
    for (std::size_t fi = 0; fi < nf; ++fi) {
        const ProblemFlight& pf = sp.flights[fi];
        const std::string f = "f" + std::to_string(pf.anchor.flight_id);
        if (pf.pinned_landing) continue;

        MilpRow src{"src_" + f, {}, 'E', 1.0};
        for (std::size_t li : net.out_links(pf.anchor.waypoint)) {
            src.terms.push_back({x_idx(fi, li), 1.0});
        }
        mi.rows.push_back(std::move(src));

        MilpRow snk{"snk_" + f, {}, 'E', 1.0};
        for (std::size_t li = 0; li < nl; ++li) {
            if (net.waypoint(links[li].to).kind == WaypointKind::Runway) {
                snk.terms.push_back({x_idx(fi, li), 1.0});
            }
        }
        mi.rows.push_back(std::move(snk));

        for (std::size_t wi = 0; wi < nw; ++wi) {
            const Waypoint& w = wps[wi];
            if (w.id == pf.anchor.waypoint || w.kind == WaypointKind::Runway) continue;
            MilpRow row{"flow_" + f + "_w" + std::to_string(w.id), {}, 'E', 0.0};
            for (std::size_t li : net.in_links(w.id)) row.terms.push_back({x_idx(fi, li), 1.0});
            for (std::size_t li : net.out_links(w.id)) row.terms.push_back({x_idx(fi, li), -1.0});
            mi.rows.push_back(std::move(row));
        }

        for (std::size_t li = 0; li < nl; ++li) {
            const Link& l = links[li];
            std::size_t i_wi = wp_pos[static_cast<std::size_t>(l.from)];
            std::size_t j_wi = wp_pos[static_cast<std::size_t>(l.to)];
            const std::string tag = f + "_" + std::to_string(l.from) + "_" + std::to_string(l.to);
            // AR_j - DP_i - d*sum(v*delta) >= -M(1-x)
            MilpRow lo{"tlo_" + tag, {}, 'G', -m_travel};
            lo.terms.push_back({ar_idx(fi, j_wi), 1.0});
            lo.terms.push_back({dp_idx(fi, i_wi), -1.0});
            for (std::size_t s = 0; s < l.paces_s_per_nm.size(); ++s) {
                lo.terms.push_back({d_idx(fi, li, s), -l.distance_nm * l.paces_s_per_nm[s]});
            }
            lo.terms.push_back({x_idx(fi, li), -m_travel});
            mi.rows.push_back(std::move(lo));
            // AR_j - DP_i - d*sum(v*delta) <= M(1-x)
            MilpRow hi{"thi_" + tag, {}, 'L', m_travel};
            hi.terms.push_back({ar_idx(fi, j_wi), 1.0});
            hi.terms.push_back({dp_idx(fi, i_wi), -1.0});
            for (std::size_t s = 0; s < l.paces_s_per_nm.size(); ++s) {
                hi.terms.push_back({d_idx(fi, li, s), -l.distance_nm * l.paces_s_per_nm[s]});
            }
            hi.terms.push_back({x_idx(fi, li), m_travel});
            mi.rows.push_back(std::move(hi));
            // Exactly one level on a used link, none otherwise.
            MilpRow spd{"spd_" + tag, {}, 'E', 0.0};
            for (std::size_t s = 0; s < l.paces_s_per_nm.size(); ++s) {
                spd.terms.push_back({d_idx(fi, li, s), 1.0});
            }
            spd.terms.push_back({x_idx(fi, li), -1.0});
            mi.rows.push_back(std::move(spd));
        }

        for (std::size_t wi = 0; wi < nw; ++wi) {
            MilpRow row{"hold_" + f + "_w" + std::to_string(wps[wi].id), {}, 'E', 0.0};
            row.terms.push_back({dp_idx(fi, wi), 1.0});
            row.terms.push_back({ar_idx(fi, wi), -1.0});
            row.terms.push_back({ht_idx(fi, wi), -1.0});
            mi.rows.push_back(std::move(row));
        }
    }

    // Separation disjunctions, one order binary per (waypoint, pair).
    for (std::size_t ia = 0; ia < nf; ++ia) {
        for (std::size_t ib = ia + 1; ib < nf; ++ib) {
            double g = sp.pair_gap(ia, ib);
            const std::string pair_tag = "f" + std::to_string(sp.flights[ia].anchor.flight_id) +
                                         "_f" + std::to_string(sp.flights[ib].anchor.flight_id);
            for (std::size_t wi = 0; wi < nw; ++wi) {
                const std::string tag = "w" + std::to_string(wps[wi].id) + "_" + pair_tag;
                std::size_t o = o_idx(ia, ib, wi);
                struct Side {
                    std::size_t plus, minus;
                    bool active_when_one;
                    const char* nm;
                };
                const Side sides[4] = {
                    {ar_idx(ib, wi), ar_idx(ia, wi), true, "sepA1_"},
                    {ar_idx(ia, wi), ar_idx(ib, wi), false, "sepA0_"},
                    {dp_idx(ib, wi), dp_idx(ia, wi), true, "sepD1_"},
                    {dp_idx(ia, wi), dp_idx(ib, wi), false, "sepD0_"},
                };
                for (const Side& sd : sides) {
                    MilpRow row{sd.nm + tag, {}, 'G', g};
                    row.terms.push_back({sd.plus, 1.0});
                    row.terms.push_back({sd.minus, -1.0});
                    if (sd.active_when_one) {
                        row.terms.push_back({o, -m_disj});
                        row.rhs -= m_disj;
                    } else {
                        row.terms.push_back({o, m_disj});
                    }
                    MilpRow probe = row;
                    if (!append_absence_slack(probe, ia, wi, m_disj)) continue;
                    if (!append_absence_slack(probe, ib, wi, m_disj)) continue;
                    mi.rows.push_back(std::move(probe));
                }
            }
            // Rear-end: departure order at the tail forces arrival order at
            // the head, reusing the tail's order binary.
            for (std::size_t li = 0; li < nl; ++li) {
                const Link& l = links[li];
                if (sp.flights[ia].pinned_landing || sp.flights[ib].pinned_landing) continue;
                std::size_t i_wi = wp_pos[static_cast<std::size_t>(l.from)];
                std::size_t j_wi = wp_pos[static_cast<std::size_t>(l.to)];
                std::size_t o = o_idx(ia, ib, i_wi);
                const std::string tag = std::to_string(l.from) + "_" + std::to_string(l.to) + "_" +
                                        pair_tag;
                for (int dir = 0; dir < 2; ++dir) {
                    MilpRow row{(dir ? "rear1_" : "rear0_") + tag, {}, 'G', g};
                    std::size_t plus = dir ? ar_idx(ib, j_wi) : ar_idx(ia, j_wi);
                    std::size_t minus = dir ? ar_idx(ia, j_wi) : ar_idx(ib, j_wi);
                    row.terms.push_back({plus, 1.0});
                    row.terms.push_back({minus, -1.0});
                    if (dir) {
                        row.terms.push_back({o, -m_disj});
                        row.rhs -= m_disj;
                    } else {
                        row.terms.push_back({o, m_disj});
                    }
                    row.terms.push_back({x_idx(ia, li), -m_disj});
                    row.terms.push_back({x_idx(ib, li), -m_disj});
                    row.rhs -= 2.0 * m_disj;
                    mi.rows.push_back(std::move(row));
                }
            }
        }
    }

    // Unused runway arrivals are pinned to zero so the objective can sum
    // over all runways.
    for (std::size_t fi = 0; fi < nf; ++fi) {
        const ProblemFlight& pf = sp.flights[fi];
        for (std::size_t wi = 0; wi < nw; ++wi) {
            const Waypoint& w = wps[wi];
            if (w.kind != WaypointKind::Runway || w.id == pf.anchor.waypoint) continue;
            MilpRow row{"rg_f" + std::to_string(pf.anchor.flight_id) + "_w" + std::to_string(w.id),
                        {}, 'L', 0.0};
            row.terms.push_back({ar_idx(fi, wi), 1.0});
            if (!pf.pinned_landing) {
                for (std::size_t li : net.in_links(w.id)) {
                    row.terms.push_back({x_idx(fi, li), -t_guard});
                }
            }
            mi.rows.push_back(std::move(row));
        }
    }

    // One-sided clearance from frozen passages: the frozen flight passed
    // first; anything planned there now must trail it by the gap.
    for (std::size_t zi = 0; zi < hp.frozen.size(); ++zi) {
        const FrozenPassage& fz = hp.frozen[zi];
        std::size_t wi = wp_pos[static_cast<std::size_t>(fz.waypoint)];
        for (std::size_t fi = 0; fi < nf; ++fi) {
            const ProblemFlight& pf = sp.flights[fi];
            if (pf.anchor.flight_id == fz.flight_id) continue;
            if (pf.anchor.waypoint == fz.waypoint) continue; // pinned history
            double g = hp.separation.pair_gap(fz.wake, pf.anchor.wake);
            const std::string tag = "z" + std::to_string(zi) + "_f" +
                                    std::to_string(pf.anchor.flight_id);
            MilpRow ar{"fza_" + tag, {}, 'G', fz.arrival + g - m_frozen};
            ar.terms.push_back({ar_idx(fi, wi), 1.0});
            MilpRow probe_a = ar;
            bool ok_a = append_absence_slack(probe_a, fi, wi, m_frozen);
            // append_absence_slack already subtracted m for the vis slack;
            // undo the double count: the base rhs included -m once.
            if (ok_a) {
                probe_a.rhs += m_frozen; // base rhs already carried the -m
                mi.rows.push_back(std::move(probe_a));
            }
            MilpRow dp{"fzd_" + tag, {}, 'G', fz.departure + g - m_frozen};
            dp.terms.push_back({dp_idx(fi, wi), 1.0});
            MilpRow probe_d = dp;
            if (append_absence_slack(probe_d, fi, wi, m_frozen)) {
                probe_d.rhs += m_frozen;
                mi.rows.push_back(std::move(probe_d));
            }
        }
    }

    // Objective: mean landing time, summed over runway arrivals.
    for (std::size_t fi = 0; fi < nf; ++fi) {
        for (std::size_t wi = 0; wi < nw; ++wi) {
            if (wps[wi].kind != WaypointKind::Runway) continue;
            mi.objective.push_back({ar_idx(fi, wi), 1.0 / static_cast<double>(nf)});
        }
    }

    return out;
}

Schedule decode(const StructuredProblem& sp, const StructuredSolution& sol) {
    if (sol.flights.size() != sp.flights.size()) {
        throw DecodeError("solution covers " + std::to_string(sol.flights.size()) + " of " +
                          std::to_string(sp.flights.size()) + " flights");
    }
    const TmaNetwork& net = *sp.net;
    Schedule sched;
    for (std::size_t fi = 0; fi < sp.flights.size(); ++fi) {
        const ProblemFlight& pf = sp.flights[fi];
        const FlightChoice& c = sol.flights[fi];
        FlightSchedule fs;
        fs.flight_id = pf.anchor.flight_id;
        fs.route = c.route;
        fs.arrival = c.arrival;
        fs.departure = c.departure;
        fs.speed_level = c.levels;
        if (c.route.empty() || c.route.front() != pf.anchor.waypoint) {
            throw DecodeError("route discontinuity: flight " + std::to_string(fs.flight_id) +
                              " does not start at its anchor");
        }
        for (std::size_t p = 0; p + 1 < c.route.size(); ++p) {
            if (!net.adjacent(c.route[p], c.route[p + 1])) {
                throw DecodeError("route discontinuity: flight " + std::to_string(fs.flight_id) +
                                  " jumps " + std::to_string(c.route[p]) + "->" +
                                  std::to_string(c.route[p + 1]));
            }
        }
        if (c.arrival.size() != c.route.size() || c.departure.size() != c.route.size() ||
            c.levels.size() + 1 != c.route.size()) {
            throw DecodeError("solution arrays inconsistent for flight " +
                              std::to_string(fs.flight_id));
        }
        fs.holding.resize(c.route.size());
        for (std::size_t p = 0; p < c.route.size(); ++p) {
            fs.holding[p] = c.departure[p] - c.arrival[p];
        }
        sched.flights.push_back(std::move(fs));
    }
    double sum = 0.0;
    for (const auto& fs : sched.flights) sum += fs.landing_time();
    sched.objective = sched.flights.empty() ? 0.0 : sum / static_cast<double>(sched.flights.size());

    auto violations = audit_schedule(sp.hp, sched, 1e-6);
    if (!violations.empty()) {
        const Violation& v = violations.front();
        std::ostringstream os;
        os << "solution violates " << to_string(v.family) << " by " << v.magnitude << "s: "
           << v.detail;
        throw DecodeError(os.str());
    }
    return sched;
}

std::string big_m_report(const std::vector<BigMEntry>& entries) {
    std::ostringstream os;
    os << "family,value,note\n";
    for (const auto& e : entries) {
        os << e.family << "," << num(e.value) << "," << e.note << "\n";
    }
    return os.str();
}

} // namespace tma
