#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "tma/problem.hpp"
#include "tma/schedule.hpp"

namespace tma {

struct BigMEntry {
    std::string family;
    double value = 0.0;
    std::string note;
};

struct MilpVar {
    std::string name;
    bool is_binary = false;
    double lb = 0.0;
    double ub = 0.0;
};

struct MilpRow {
    std::string name;
    std::vector<std::pair<std::size_t, double>> terms; // (variable index, coefficient)
    char sense = 'G';                                  // 'G' >=, 'L' <=, 'E' ==
    double rhs = 0.0;
};

// Flat sparse form of the encoded problem, for export and cross-checking.
struct MilpInstance {
    std::string name;
    std::vector<MilpVar> vars;
    std::vector<MilpRow> rows;
    std::vector<std::pair<std::size_t, double>> objective; // minimize
    std::vector<BigMEntry> big_m;
};

// Per-flight view the solver works on.
struct ProblemFlight {
    FlightAnchor anchor;
    bool pinned_landing = false;            // anchored on a runway, nothing to decide
    std::vector<std::size_t> usable_links;  // network link indices reachable from the anchor
    double anchor_hold_lo = 0.0;
    double anchor_hold_hi = 0.0;
};

// Structured (non-flattened) encoding sharing the exact feasible set with the
// flat MilpInstance.
struct StructuredProblem {
    const TmaNetwork* net = nullptr;
    HorizonProblem hp;
    std::vector<ProblemFlight> flights; // sorted by flight id
    double t_max = 0.0;
    std::vector<BigMEntry> big_m;

    double pair_gap(std::size_t ia, std::size_t ib) const {
        return hp.separation.pair_gap(flights[ia].anchor.wake, flights[ib].anchor.wake);
    }
    double hold_lo(std::size_t fi, int wp) const {
        return wp == flights[fi].anchor.waypoint ? flights[fi].anchor_hold_lo : 0.0;
    }
    double hold_hi(std::size_t fi, int wp) const {
        if (wp == flights[fi].anchor.waypoint) return flights[fi].anchor_hold_hi;
        return net->waypoint(wp).holding_allowed ? hp.max_holding : 0.0;
    }
};

struct EncodeResult {
    StructuredProblem structured;
    MilpInstance milp;
};

// Encodes the horizon problem into both representations.
EncodeResult encode(const HorizonProblem& hp);

// The big-M registry alone (also embedded in encode() results).
std::vector<BigMEntry> big_m_values(const HorizonProblem& hp);

// One flight's fixed discrete choices plus the realized times.
struct FlightChoice {
    std::vector<int> route;      // waypoint ids, anchor..runway
    std::vector<int> levels;     // per link
    std::vector<double> arrival; // per node
    std::vector<double> departure;
};

struct StructuredSolution {
    std::vector<FlightChoice> flights; // aligned with StructuredProblem::flights
};

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Turns a structured solution into a Schedule, verifying it against the full
// constraint set (tolerance 1e-6 s). Throws DecodeError naming the first
// violated family and its magnitude.
Schedule decode(const StructuredProblem& sp, const StructuredSolution& sol);

std::string big_m_report(const std::vector<BigMEntry>& entries);

} // namespace tma
